//! Exact arithmetic with algebraic integers in the n-th cyclotomic field.
//!
//! Values are carried redundantly as integer combinations Σ aₖ·ζⁿᵏ with
//! k < n (the group ring Z[x]/(xⁿ−1)), which makes sums and sparse products
//! cheap. Canonical questions — equality, "is this a rational integer" — go
//! through reduction by the n-th cyclotomic polynomial, computed once per
//! order and cached per value call.

use crate::error::{Error, Result};

/// Euler totient by trial-division factoring; orders here are tiny.
pub fn phi(n: usize) -> usize {
    let mut n = n;
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            result -= result / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the n-th cyclotomic polynomial, ascending degree.
/// Built by dividing xⁿ−1 by Φ_d for every proper divisor d; all divisions
/// are exact over the integers. Cached per order, since reduction consults
/// the same polynomial for every value of a table.
pub fn cyclotomic_poly(n: usize) -> std::sync::Arc<Vec<i64>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let fresh = Arc::new(cyclotomic_poly_uncached(n));
    cache.lock().unwrap().insert(n, fresh.clone());
    fresh
}

fn cyclotomic_poly_uncached(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    // Φ_d for each divisor d of n, in increasing order
    let mut memo: Vec<(usize, Vec<i64>)> = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        // x^d - 1
        let mut poly = vec![0i64; d + 1];
        poly[0] = -1;
        poly[d] = 1;
        for (e, q) in &memo {
            if d % e == 0 {
                poly = poly_div_exact(&poly, q);
            }
        }
        memo.push((d, poly));
    }
    memo.pop().unwrap().1
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dd <= dn && *den.last().unwrap() == 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &dc) in den.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    quot
}

/// An element of Z[ζ_n], stored as coefficients of ζⁿᵏ for k = 0..n.
#[derive(Clone, Debug)]
pub struct Cyc {
    n: usize,
    c: Vec<i64>,
}

impl Cyc {
    pub fn zero(n: usize) -> Cyc {
        assert!(n >= 1);
        Cyc { n, c: vec![0; n] }
    }

    pub fn from_int(n: usize, v: i64) -> Cyc {
        let mut x = Cyc::zero(n);
        x.c[0] = v;
        x
    }

    pub fn one(n: usize) -> Cyc {
        Cyc::from_int(n, 1)
    }

    /// ζ_n^k
    pub fn root_power(n: usize, k: usize) -> Cyc {
        let mut x = Cyc::zero(n);
        x.c[k % n] = 1;
        x
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.c[k % self.n]
    }

    pub fn add_root(&mut self, k: usize, m: i64) {
        self.c[k % self.n] += m;
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.n, other.n);
        Cyc {
            n: self.n,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.n, other.n);
        Cyc {
            n: self.n,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Cyc) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            n: self.n,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, m: i64) -> Cyc {
        Cyc {
            n: self.n,
            c: self.c.iter().map(|a| a * m).collect(),
        }
    }

    /// Skips zero coefficients, so products of character values (at most
    /// o(g) terms each) stay cheap even for large n.
    pub fn mul(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![0i64; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = i + j;
                out[if k >= n { k - n } else { k }] += a * b;
            }
        }
        Cyc { n, c: out }
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Cyc {
        let n = self.n;
        let mut out = vec![0i64; n];
        for (k, &a) in self.c.iter().enumerate() {
            out[if k == 0 { 0 } else { n - k }] = a;
        }
        Cyc { n, c: out }
    }

    /// Coordinates in the power basis 1, ζ, …, ζ^{φ(n)−1}: remainder of the
    /// carried polynomial modulo Φ_n.
    pub fn reduced(&self) -> Vec<i64> {
        let ph = cyclotomic_poly(self.n);
        let deg = ph.len() - 1;
        let mut rem = self.c.clone();
        for k in (deg..rem.len()).rev() {
            let c = rem[k];
            if c != 0 {
                rem[k] = 0;
                for (i, &pc) in ph.iter().enumerate().take(deg) {
                    rem[k - deg + i] -= c * pc;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    pub fn is_zero(&self) -> bool {
        if self.c.iter().all(|&a| a == 0) {
            return true;
        }
        self.reduced().iter().all(|&a| a == 0)
    }

    /// Some(v) when the value is the rational integer v.
    pub fn to_integer(&self) -> Option<i64> {
        let r = self.reduced();
        if r[1..].iter().all(|&a| a == 0) {
            Some(r[0])
        } else {
            None
        }
    }

    /// Approximate complex value, for display and floating-point consumers.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.n as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, &a) in self.c.iter().enumerate() {
            if a != 0 {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n;
                re += a as f64 * th.cos();
                im += a as f64 * th.sin();
            }
        }
        (re, im)
    }

    /// Reinterpret in the m-th cyclotomic field, m a multiple of n.
    pub fn embed(&self, m: usize) -> Result<Cyc> {
        if m % self.n != 0 {
            return Err(Error::Invalid(format!(
                "cannot embed order {} into order {}",
                self.n, m
            )));
        }
        let step = m / self.n;
        let mut out = Cyc::zero(m);
        for (k, &a) in self.c.iter().enumerate() {
            out.c[k * step] = a;
        }
        Ok(out)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n);
        self.sub(other).is_zero()
    }
}
impl Eq for Cyc {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // first index with a coefficient outside {-1,0,1}
        let c105 = cyclotomic_poly(105);
        assert_eq!(c105.len() - 1, phi(105));
        assert!(c105.contains(&-2));
    }

    #[test]
    fn totient_values() {
        let known = [(1, 1), (2, 1), (6, 2), (12, 4), (30, 8), (420, 96)];
        for (n, v) in known {
            assert_eq!(phi(n), v, "phi({n})");
        }
        for n in 1..60usize {
            // phi(n) = degree of the minimal polynomial
            assert_eq!(phi(n), cyclotomic_poly(n).len() - 1);
        }
    }

    #[test]
    fn root_relations() {
        // 1 + ζ₃ + ζ₃² = 0
        let s = Cyc::one(3)
            .add(&Cyc::root_power(3, 1))
            .add(&Cyc::root_power(3, 2));
        assert!(s.is_zero());
        // ζ₆² = ζ₆ − 1
        let lhs = Cyc::root_power(6, 2);
        let rhs = Cyc::root_power(6, 1).sub(&Cyc::one(6));
        assert_eq!(lhs, rhs);
        // Σ_{k=1..4} ζ₅ᵏ = −1
        let mut s = Cyc::zero(5);
        for k in 1..5 {
            s.add_assign(&Cyc::root_power(5, k));
        }
        assert_eq!(s.to_integer(), Some(-1));
        // golden-ratio product: (ζ₅+ζ₅⁴)(ζ₅²+ζ₅³) = −1
        let a = Cyc::root_power(5, 1).add(&Cyc::root_power(5, 4));
        let b = Cyc::root_power(5, 2).add(&Cyc::root_power(5, 3));
        assert_eq!(a.mul(&b).to_integer(), Some(-1));
    }

    #[test]
    fn multiplication_matches_exponent_addition() {
        for n in [5usize, 8, 12, 30] {
            for a in 0..n {
                for b in 0..n {
                    let prod = Cyc::root_power(n, a).mul(&Cyc::root_power(n, b));
                    assert_eq!(prod, Cyc::root_power(n, a + b));
                }
            }
        }
    }

    #[test]
    fn conjugation_and_norms() {
        for n in [7usize, 9, 12] {
            for k in 0..n {
                let z = Cyc::root_power(n, k);
                assert_eq!(z.conj().conj(), z);
                // ζᵏ · conj(ζᵏ) = 1
                assert_eq!(z.mul(&z.conj()).to_integer(), Some(1));
            }
        }
        // |1 + ζ₅|² = (1+ζ)(1+ζ⁻¹) = 2 + ζ + ζ⁴, not rational
        let w = Cyc::one(5).add(&Cyc::root_power(5, 1));
        assert_eq!(w.mul(&w.conj()).to_integer(), None);
    }

    #[test]
    fn power_basis_is_faithful() {
        // distinct small combinations have distinct reduced forms
        for n in [5usize, 6, 8, 12] {
            let d = phi(n);
            for k in 0..d {
                let r = Cyc::root_power(n, k).reduced();
                let mut want = vec![0i64; d];
                want[k] = 1;
                assert_eq!(r, want);
            }
        }
    }

    #[test]
    fn embedding_preserves_values() {
        // ζ₃ seen inside the 12th field still satisfies 1 + z + z² = 0
        let z = Cyc::root_power(3, 1).embed(12).unwrap();
        let s = Cyc::one(12).add(&z).add(&z.mul(&z));
        assert!(s.is_zero());
        assert!(Cyc::root_power(3, 1).embed(8).is_err());
        // approximate value survives the embedding
        let (re, im) = z.approx();
        assert!((re - (-0.5)).abs() < 1e-12);
        assert!((im - (0.75f64).sqrt()).abs() < 1e-12);
    }
}
