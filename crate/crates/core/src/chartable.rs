//! Exact character tables for table-backed groups, computed by splitting the
//! class-algebra matrices into common eigenvectors modulo a prime and lifting
//! eigenvalue multiplicities to cyclotomic integers (Dixon's method). On top
//! of the table: reality indicators, the minimal real representation
//! dimension, the degree zeta value ζ(2) = Σ χ(1)⁻² with its derived mixing
//! epsilon, and a sampled commutator-mixing experiment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::cyclotomic::Cyc;
use crate::elset::ElementSet;
use crate::error::{Error, Result};
use crate::table::{GroupOps, GroupTable};

/// Hard cap on the number of conjugacy classes the eigen-splitting handles.
pub const MAX_CLASSES: usize = 60;

pub struct CharTable {
    pub group_order: u64,
    pub exponent: u64,
    /// least prime ≡ 1 (mod exponent) exceeding 2√|G|, the modulus all
    /// eigenvector work ran in
    pub prime: u64,
    pub class_reps: Vec<u32>,
    pub class_sizes: Vec<u64>,
    /// index of the class of inverses, per class
    pub inverse_class: Vec<usize>,
    /// degrees, one per irreducible character, weakly increasing
    pub degrees: Vec<u64>,
    /// Frobenius–Schur indicators, aligned with `degrees`
    pub indicators: Vec<i8>,
    /// values[chi][class], exact, in the exponent-order cyclotomic field
    pub values: Vec<Vec<Cyc>>,
}

// ---------------------------------------------------------------------------
// arithmetic mod p
// ---------------------------------------------------------------------------

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime p ≡ 1 (mod m) with p² > 4·order, so that degrees are
/// recoverable from their squares mod p and m-th roots of unity exist.
pub fn modulus_for(m: u64, order: u64) -> u64 {
    let mut p = m + 1;
    loop {
        if p * p > 4 * order && is_prime(p) {
            return p;
        }
        p += m;
    }
}

fn primitive_root(p: u64) -> u64 {
    // factor p-1
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'outer: for g in 2..p {
        for &q in &factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("no primitive root found")
}

// ---------------------------------------------------------------------------
// linear algebra mod p
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(row, pr);
        let inv = inv_mod(rows[row][col], p);
        for v in rows[row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != row && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..ncols {
                    let sub = f * rows[row][c] % p;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rows.truncate(row);
    pivots
}

/// Right kernel basis of a (not necessarily square) matrix.
fn kernel_basis(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let pivots = rref(&mut a, p);
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[r][free] % p) % p;
        }
        out.push(v);
    }
    out
}

/// Characteristic polynomial mod p via Hessenberg reduction, coefficients
/// ascending, monic.
fn char_poly(mut m: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let d = m.len();
    if d == 0 {
        return vec![1];
    }
    // similarity reduction to upper Hessenberg form
    for col in 0..d.saturating_sub(2) {
        let Some(piv) = (col + 1..d).find(|&r| m[r][col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            m.swap(piv, col + 1);
            for row in m.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = inv_mod(m[col + 1][col], p);
        for r in col + 2..d {
            let f = m[r][col] * inv % p;
            if f == 0 {
                continue;
            }
            for c in 0..d {
                let sub = f * m[col + 1][c] % p;
                m[r][c] = (m[r][c] + p - sub) % p;
            }
            for i in 0..d {
                m[i][col + 1] = (m[i][col + 1] + f * m[i][r]) % p;
            }
        }
    }
    // leading-minor recurrence on the Hessenberg form
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=d {
        // (x - m[k-1][k-1]) * polys[k-1]
        let prev = &polys[k - 1];
        let mut pk = vec![0u64; k + 1];
        for (i, &c) in prev.iter().enumerate() {
            pk[i + 1] = (pk[i + 1] + c) % p;
            let sub = m[k - 1][k - 1] * c % p;
            pk[i] = (pk[i] + p - sub) % p;
        }
        let mut prod = 1u64;
        for i in (0..k.saturating_sub(1)).rev() {
            prod = prod * m[i + 1][i] % p;
            let f = m[i][k - 1] * prod % p;
            if f != 0 {
                for (c, &pc) in polys[i].iter().enumerate() {
                    let sub = f * pc % p;
                    pk[c] = (pk[c] + p - sub) % p;
                }
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

fn poly_eval(poly: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in poly.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u64, |acc, (&a, &b)| (acc + a * b) % p)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// table construction
// ---------------------------------------------------------------------------

struct ClassInfo {
    reps: Vec<u32>,
    sizes: Vec<u64>,
    inverse: Vec<usize>,
    /// class of the representative's square, per class
    square: Vec<usize>,
}

fn class_info(t: &GroupTable) -> ClassInfo {
    let cd = t.classes();
    let reps: Vec<u32> = cd.classes.iter().map(|c| c[0]).collect();
    let sizes: Vec<u64> = cd.classes.iter().map(|c| c.len() as u64).collect();
    let inverse = reps
        .iter()
        .map(|&g| cd.class_of[t.inv(g) as usize] as usize)
        .collect();
    let square = reps
        .iter()
        .map(|&g| cd.class_of[t.mul(g, g) as usize] as usize)
        .collect();
    ClassInfo {
        reps,
        sizes,
        inverse,
        square,
    }
}

/// Class-algebra matrices: m[i][j][k] counts pairs (x,y) ∈ Cᵢ×Cⱼ with
/// xy = z_k for a fixed z_k, collected as #{x ∈ Cᵢ : x⁻¹z_k ∈ Cⱼ}.
fn class_matrices(t: &GroupTable, info: &ClassInfo) -> Vec<Vec<Vec<u64>>> {
    let cd = t.classes();
    let r = info.reps.len();
    let mut mats = vec![vec![vec![0u64; r]; r]; r];
    for i in 0..r {
        for &x in &cd.classes[i] {
            let xi = t.inv(x);
            for (k, &zk) in info.reps.iter().enumerate() {
                let j = cd.class_of[t.mul(xi, zk) as usize] as usize;
                mats[i][j][k] += 1;
            }
        }
    }
    mats
}

/// Split the common eigenvectors of the class matrices over GF(p): random
/// seeded combinations first, then a deterministic sweep over the individual
/// matrices, which provably separates all eigenvectors.
fn common_eigenvectors(mats: &[Vec<Vec<u64>>], r: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    use rand::Rng;
    let mut spaces: Vec<Vec<Vec<u64>>> = {
        let mut id = vec![vec![0u64; r]; r];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1;
        }
        vec![id]
    };
    let mut round = 0u64;
    while spaces.iter().any(|s| s.len() > 1) {
        if round >= 8 + mats.len() as u64 {
            return Err(Error::NoConvergence(
                "class-matrix eigen-splitting stalled".into(),
            ));
        }
        let m: Vec<Vec<u64>> = if round < 8 {
            let mut rng = crate::rng::substream(0x44495831, "eig-combo", round);
            let coef: Vec<u64> = (0..mats.len()).map(|_| rng.gen_range(0..p)).collect();
            (0..r)
                .map(|j| {
                    (0..r)
                        .map(|k| {
                            mats.iter()
                                .zip(&coef)
                                .fold(0u64, |acc, (mi, &c)| (acc + c * (mi[j][k] % p)) % p)
                        })
                        .collect()
                })
                .collect()
        } else {
            let i = (round as usize - 8) % mats.len();
            mats[i]
                .iter()
                .map(|row| row.iter().map(|&v| v % p).collect())
                .collect()
        };
        round += 1;
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            next.extend(split_space(&m, space, p)?);
        }
        spaces = next;
    }
    Ok(spaces.into_iter().map(|mut s| s.pop().unwrap()).collect())
}

fn split_space(
    m: &[Vec<u64>],
    mut basis: Vec<Vec<u64>>,
    p: u64,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let pivots = rref(&mut basis, p);
    let d = basis.len();
    // restriction: M·bᵢ = Σⱼ rest[i][j]·bⱼ
    let mut rest = vec![vec![0u64; d]; d];
    for (i, b) in basis.iter().enumerate() {
        let mut w = mat_vec(m, b, p);
        for (t, &pc) in pivots.iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                rest[i][t] = c;
                for (wc, bc) in w.iter_mut().zip(&basis[t]) {
                    *wc = (*wc + p - c * bc % p) % p;
                }
            }
        }
        if w.iter().any(|&v| v != 0) {
            return Err(Error::NoConvergence(
                "subspace not invariant under class matrix".into(),
            ));
        }
    }
    let cp = char_poly(rest.clone(), p);
    let mut parts = Vec::new();
    let mut found = 0usize;
    for lam in 0..p {
        if poly_eval(&cp, lam, p) != 0 {
            continue;
        }
        // left eigenvectors of rest: right kernel of transpose(rest) - lam
        let mut a = vec![vec![0u64; d]; d];
        for i in 0..d {
            for j in 0..d {
                a[j][i] = rest[i][j];
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = (row[i] + p - lam) % p;
        }
        let ker = kernel_basis(a, p);
        found += ker.len();
        if !ker.is_empty() {
            let sub: Vec<Vec<u64>> = ker
                .iter()
                .map(|c| {
                    let mut v = vec![0u64; basis[0].len()];
                    for (ci, b) in c.iter().zip(&basis) {
                        for (vc, bc) in v.iter_mut().zip(b) {
                            *vc = (*vc + ci * bc) % p;
                        }
                    }
                    v
                })
                .collect();
            parts.push(sub);
        }
        if found == d {
            break;
        }
    }
    if found != d {
        return Err(Error::NoConvergence(
            "class matrix not diagonalizable over the chosen prime".into(),
        ));
    }
    Ok(parts)
}

/// Exact character table. Fails on groups with more than `MAX_CLASSES`
/// classes; everything else is validated internally (degree sum, row
/// orthogonality, indicator integrality) before the table is returned.
pub fn character_table(t: &GroupTable) -> Result<CharTable> {
    let r = t.classes().classes.len();
    if r > MAX_CLASSES {
        return Err(Error::TooManyClasses {
            got: r,
            cap: MAX_CLASSES,
        });
    }
    let n = t.order() as u64;
    let exponent = t.exponent();
    let p = modulus_for(exponent, n);
    let info = class_info(t);
    let mats = class_matrices(t, &info);
    let eig = common_eigenvectors(&mats, r, p)?;

    // identity class is first; normalize ω so its identity coordinate is 1
    let mut omegas = Vec::new();
    for mut v in eig {
        if v[0] == 0 {
            return Err(Error::NoConvergence(
                "eigenvector vanishing at the identity class".into(),
            ));
        }
        let f = inv_mod(v[0], p);
        for c in v.iter_mut() {
            *c = *c * f % p;
        }
        omegas.push(v);
    }

    // degrees: d² = |G| / Σ_k ω_k ω_{k⁻¹} / n_k  (all mod p)
    let np = n % p;
    let isqrt = (1..).take_while(|d| d * d <= n).last().unwrap_or(1);
    let mut rows: Vec<(u64, Vec<u64>)> = Vec::new();
    for om in &omegas {
        let mut s = 0u64;
        for k in 0..r {
            s = (s + om[k] * om[info.inverse[k]] % p * inv_mod(info.sizes[k] % p, p)) % p;
        }
        let target = np * inv_mod(s, p) % p;
        let d = (1..=isqrt)
            .find(|&d| d % p * (d % p) % p == target)
            .ok_or_else(|| Error::NoConvergence("degree not recoverable".into()))?;
        // χ(g_k) mod p
        let chi_p: Vec<u64> = (0..r)
            .map(|k| d % p * om[k] % p * inv_mod(info.sizes[k] % p, p) % p)
            .collect();
        rows.push((d, chi_p));
    }

    // lift to cyclotomic integers through eigenvalue multiplicities
    let z = pow_mod(primitive_root(p), (p - 1) / exponent, p);
    let e_us = exponent as usize;
    let cd = t.classes();
    let mut values_by_row: Vec<Vec<Cyc>> = Vec::new();
    for (d, chi_p) in &rows {
        let mut vals = Vec::with_capacity(r);
        for k in 0..r {
            let g = info.reps[k];
            let o = t.element_orders()[g as usize];
            let zo = pow_mod(z, exponent / o, p);
            let oinv = inv_mod(o % p, p);
            let mut value = Cyc::zero(e_us);
            let mut total = 0u64;
            for tt in 0..o {
                // m_t = o⁻¹ Σ_j χ_p(g^j)·ζ_o^{−jt}
                let mut s = 0u64;
                let mut gj = 0u32; // g^j, starting at j = 0
                for j in 0..o {
                    let cls = cd.class_of[gj as usize] as usize;
                    let expo = (o - (j * tt) % o) % o;
                    s = (s + chi_p[cls] * pow_mod(zo, expo, p)) % p;
                    gj = t.mul(gj, g);
                }
                let m = s * oinv % p;
                if m > *d {
                    return Err(Error::NoConvergence(
                        "eigenvalue multiplicity out of range".into(),
                    ));
                }
                total += m;
                if m > 0 {
                    value.add_root(tt as usize * (e_us / o as usize), m as i64);
                }
            }
            if total != *d {
                return Err(Error::NoConvergence(
                    "eigenvalue multiplicities do not sum to the degree".into(),
                ));
            }
            vals.push(value);
        }
        values_by_row.push(vals);
    }

    // canonical order: by degree, then by reduced value coordinates
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let keys: Vec<(u64, Vec<Vec<i64>>)> = (0..rows.len())
        .map(|i| {
            (
                rows[i].0,
                values_by_row[i].iter().map(|v| v.reduced()).collect(),
            )
        })
        .collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let degrees: Vec<u64> = order.iter().map(|&i| rows[i].0).collect();
    let values: Vec<Vec<Cyc>> = order.iter().map(|&i| values_by_row[i].clone()).collect();

    // degree sum
    if degrees.iter().map(|d| d * d).sum::<u64>() != n {
        return Err(Error::NoConvergence(
            "degree squares do not sum to the group order".into(),
        ));
    }
    // exact row orthogonality
    for (a, va) in values.iter().enumerate() {
        for (b, vb) in values.iter().enumerate().skip(a) {
            let mut s = Cyc::zero(e_us);
            for k in 0..r {
                s.add_assign(&va[k].mul(&vb[info.inverse[k]]).scale(info.sizes[k] as i64));
            }
            let want = if a == b { n as i64 } else { 0 };
            if s.to_integer() != Some(want) {
                return Err(Error::NoConvergence("row orthogonality failed".into()));
            }
        }
    }
    // indicators: (1/|G|) Σ_g χ(g²)
    let mut indicators = Vec::with_capacity(values.len());
    for va in &values {
        let mut s = Cyc::zero(e_us);
        for k in 0..r {
            s.add_assign(&va[info.square[k]].scale(info.sizes[k] as i64));
        }
        let v = s
            .to_integer()
            .ok_or_else(|| Error::NoConvergence("indicator sum not rational".into()))?;
        let ind = match v {
            v if v == n as i64 => 1i8,
            0 => 0i8,
            v if v == -(n as i64) => -1i8,
            _ => {
                return Err(Error::NoConvergence(
                    "indicator outside {-1,0,1}".into(),
                ))
            }
        };
        indicators.push(ind);
    }
    // real character count equals real class count
    let real_classes = (0..r).filter(|&k| info.inverse[k] == k).count();
    let real_chars = indicators.iter().filter(|&&i| i != 0).count();
    if real_classes != real_chars {
        return Err(Error::NoConvergence(
            "real character count does not match real class count".into(),
        ));
    }

    Ok(CharTable {
        group_order: n,
        exponent,
        prime: p,
        class_reps: info.reps,
        class_sizes: info.sizes,
        inverse_class: info.inverse,
        degrees,
        indicators,
        values,
    })
}

impl CharTable {
    pub fn n_chars(&self) -> usize {
        self.degrees.len()
    }

    pub fn fs_indicator(&self, chi: usize) -> i8 {
        self.indicators[chi]
    }

    /// Index of the trivial character (all values 1).
    pub fn trivial_char(&self) -> usize {
        (0..self.n_chars())
            .find(|&i| {
                self.degrees[i] == 1
                    && self.values[i].iter().all(|v| v.to_integer() == Some(1))
            })
            .expect("trivial character always present")
    }

    /// Column orthogonality Σ_χ χ(gᵢ)·conj(χ(gⱼ)) = δᵢⱼ·|C(gᵢ)|, exact.
    pub fn column_orthogonality_holds(&self) -> bool {
        let r = self.class_sizes.len();
        let e = self.exponent as usize;
        for i in 0..r {
            for j in i..r {
                let mut s = Cyc::zero(e);
                for va in &self.values {
                    s.add_assign(&va[i].mul(&va[j].conj()));
                }
                let want = if i == j {
                    (self.group_order / self.class_sizes[i]) as i64
                } else {
                    0
                };
                if s.to_integer() != Some(want) {
                    return false;
                }
            }
        }
        true
    }
}

/// Minimal dimension of a nontrivial real representation: χ(1) for real
/// (indicator +1) characters, 2χ(1) otherwise, minimized over nontrivial χ.
pub fn min_real_dimension(t: &CharTable) -> u64 {
    let triv = t.trivial_char();
    (0..t.n_chars())
        .filter(|&i| i != triv)
        .map(|i| {
            if t.indicators[i] == 1 {
                t.degrees[i]
            } else {
                2 * t.degrees[i]
            }
        })
        .min()
        .unwrap_or(1)
}

/// Σ_χ χ(1)⁻², exact.
pub fn degree_zeta_two(t: &CharTable) -> BigRational {
    t.degrees
        .iter()
        .map(|&d| BigRational::new(BigInt::one(), BigInt::from(d * d)))
        .fold(BigRational::new(BigInt::from(0), BigInt::one()), |a, b| {
            a + b
        })
}

/// (ζ(2) − 1)^{1/4} as a float; 0 exactly when the group is trivial-like
/// (all degrees 1 ≠ happens only for |G| = 1 to make ζ = 1).
pub fn mixing_epsilon(t: &CharTable) -> f64 {
    let z = degree_zeta_two(t) - BigRational::one();
    debug_assert!(!z.is_negative());
    z.to_f64().expect("small rational").powf(0.25)
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub group_order: usize,
    pub eta: f64,
    pub epsilon: f64,
    /// (1 − η − 3ε)·|G|, the guaranteed lower bound on |γ(W)|
    pub bound: f64,
    /// bound ≤ 0 makes every trial pass without information
    pub vacuous: bool,
    pub trials: u64,
    pub min_image: usize,
    pub all_pass: bool,
}

/// Sampled commutator-mixing check: W ⊆ G×G uniform with
/// |W| = ⌈(1−η)|G|²⌉; the commutator image γ(W) = {[x,y] : (x,y) ∈ W} must
/// have at least (1−η−3ε)·|G| elements.
pub fn commutator_mixing_sample(
    g: &GroupTable,
    t: &CharTable,
    eta: f64,
    trials: u64,
    seed: u64,
) -> MixingReport {
    use rand::Rng;
    let n = g.order();
    let epsilon = mixing_epsilon(t);
    let bound = (1.0 - eta - 3.0 * epsilon) * n as f64;
    let pairs = n * n;
    let k = ((1.0 - eta) * pairs as f64).ceil() as usize;
    let mut min_image = usize::MAX;
    let mut all_pass = true;
    let mut idx: Vec<u32> = (0..pairs as u32).collect();
    for trial in 0..trials {
        let mut rng = crate::rng::substream(seed, "mixing", trial);
        for i in 0..k {
            let j = rng.gen_range(i..pairs);
            idx.swap(i, j);
        }
        let mut image = ElementSet::empty(n);
        for &pair in &idx[..k] {
            let x = pair as usize / n;
            let y = pair as usize % n;
            image.insert(g.comm(x as u32, y as u32));
        }
        min_image = min_image.min(image.len());
        if (image.len() as f64) < bound {
            all_pass = false;
        }
    }
    MixingReport {
        group_order: n,
        eta,
        epsilon,
        bound,
        vacuous: bound <= 0.0,
        trials,
        min_image,
        all_pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions as cons;
    use std::sync::Arc;

    fn table_of(g: crate::group::Group) -> Arc<GroupTable> {
        g.table().unwrap()
    }

    #[test]
    fn char_poly_matches_determinant_oracle() {
        use rand::Rng;
        let p = 101u64;
        let mut rng = crate::rng::substream(7, "charpoly", 0);
        for d in 2..7usize {
            let m: Vec<Vec<u64>> =
                (0..d).map(|_| (0..d).map(|_| rng.gen_range(0..p)).collect()).collect();
            let cp = char_poly(m.clone(), p);
            assert_eq!(cp.len(), d + 1);
            assert_eq!(cp[d], 1, "monic");
            for _ in 0..16 {
                let lam = rng.gen_range(0..p);
                // oracle: det(λI − M) by Gaussian elimination
                let mut a: Vec<Vec<u64>> = m
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, &v)| {
                                let base = if i == j { lam } else { 0 };
                                (base + p - v % p) % p
                            })
                            .collect()
                    })
                    .collect();
                let mut det = 1u64;
                for col in 0..d {
                    let Some(piv) = (col..d).find(|&r| a[r][col] != 0) else {
                        det = 0;
                        break;
                    };
                    if piv != col {
                        a.swap(piv, col);
                        det = p - det;
                    }
                    det = det * a[col][col] % p;
                    let inv = inv_mod(a[col][col], p);
                    for r in col + 1..d {
                        let f = a[r][col] * inv % p;
                        for c in col..d {
                            let sub = f * a[col][c] % p;
                            a[r][c] = (a[r][c] + p - sub) % p;
                        }
                    }
                }
                assert_eq!(poly_eval(&cp, lam, p), det % p);
            }
        }
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(modulus_for(2, 6), 5);
        assert_eq!(modulus_for(4, 8), 13);
        assert_eq!(modulus_for(30, 360), 61);
        assert_eq!(modulus_for(1, 1), 3);
    }

    #[test]
    fn cyclic_tables_match_explicit_roots() {
        // C₅: the table is exactly (ζ₅^{jk})
        let t = table_of(cons::cyclic(5));
        let ct = character_table(t.as_ref()).unwrap();
        assert_eq!(ct.degrees, vec![1; 5]);
        // every row must be k ↦ ζ₅^{jk} for some j; identify j by the value
        // at a generator class and check the rest of the row
        let gen_class = (0..5)
            .find(|&k| t.element_orders()[ct.class_reps[k] as usize] == 5)
            .unwrap();
        for row in &ct.values {
            let j = (0..5)
                .find(|&j| row[gen_class] == Cyc::root_power(5, j))
                .expect("value must be a 5th root of unity");
            let rep = ct.class_reps[gen_class];
            let mut x = 0u32;
            for _ in 0..5 {
                let k = t.classes().class_of[x as usize] as usize;
                // x = rep^m for some m; value must be ζ^{jm}
                let m = (0..5).find(|&m| {
                    let mut y = 0u32;
                    for _ in 0..m {
                        y = t.mul(y, rep);
                    }
                    y == x
                });
                if let Some(m) = m {
                    assert_eq!(row[k], Cyc::root_power(5, j * m));
                }
                x = t.mul(x, rep);
            }
        }
    }

    #[test]
    fn degrees_of_small_groups() {
        let cases: Vec<(crate::group::Group, Vec<u64>)> = vec![
            (cons::cyclic(2), vec![1, 1]),
            (cons::cyclic(3), vec![1, 1, 1]),
            (cons::sym(3), vec![1, 1, 2]),
            (cons::q8(), vec![1, 1, 1, 1, 2]),
            (cons::dihedral(4), vec![1, 1, 1, 1, 2]),
            (cons::sym(4), vec![1, 1, 2, 3, 3]),
            (cons::alt(5), vec![1, 3, 3, 4, 5]),
            (cons::extraspecial_27(), vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3]),
        ];
        for (g, want) in cases {
            let t = table_of(g);
            let ct = character_table(t.as_ref()).unwrap();
            assert_eq!(ct.degrees, want);
            // linear character count is the derived-quotient order
            let whole = crate::subgroup::Subgrp::whole(t.as_ref());
            let gd = crate::subgroup::derived(t.as_ref(), &whole);
            let linear = ct.degrees.iter().filter(|&&d| d == 1).count();
            assert_eq!(linear, t.order() / gd.order());
        }
        let t = cons::psl2(7).unwrap().table().unwrap();
        let ct = character_table(t.as_ref()).unwrap();
        assert_eq!(ct.degrees, vec![1, 3, 3, 6, 7, 8]);
    }

    #[test]
    fn sym3_exact_values() {
        let t = table_of(cons::sym(3));
        let ct = character_table(t.as_ref()).unwrap();
        // classes: identity, then by size: 3-cycles (2), transpositions (3)
        assert_eq!(ct.class_sizes, vec![1, 2, 3]);
        let as_ints = |row: &[Cyc]| -> Vec<i64> {
            row.iter().map(|v| v.to_integer().unwrap()).collect()
        };
        let rows: Vec<Vec<i64>> = ct.values.iter().map(|r| as_ints(r)).collect();
        assert!(rows.contains(&vec![1, 1, 1]));
        assert!(rows.contains(&vec![1, 1, -1]));
        assert!(rows.contains(&vec![2, -1, 0]));
        assert_eq!(ct.indicators, vec![1, 1, 1]);
    }

    #[test]
    fn quaternion_group_has_a_quaternionic_character_but_dihedral_does_not() {
        let q8 = character_table(table_of(cons::q8()).as_ref()).unwrap();
        let two = (0..5).find(|&i| q8.degrees[i] == 2).unwrap();
        assert_eq!(q8.indicators[two], -1);
        let d4 = character_table(table_of(cons::dihedral(4)).as_ref()).unwrap();
        let two = (0..5).find(|&i| d4.degrees[i] == 2).unwrap();
        assert_eq!(d4.indicators[two], 1);
    }

    #[test]
    fn alt5_golden_values_and_indicators() {
        let t = table_of(cons::alt(5));
        let ct = character_table(t.as_ref()).unwrap();
        assert!(ct.indicators.iter().all(|&i| i == 1));
        // the two degree-3 characters take conjugate golden-ratio values on
        // a 5-cycle class: sum 1, product −1 (roots of x² − x − 1)
        let five = (0..5)
            .find(|&k| t.element_orders()[ct.class_reps[k] as usize] == 5)
            .unwrap();
        let deg3: Vec<&Cyc> = (0..5)
            .filter(|&i| ct.degrees[i] == 3)
            .map(|i| &ct.values[i][five])
            .collect();
        assert_eq!(deg3.len(), 2);
        assert_eq!(deg3[0].add(deg3[1]).to_integer(), Some(1));
        assert_eq!(deg3[0].mul(deg3[1]).to_integer(), Some(-1));
    }

    #[test]
    fn column_orthogonality_on_catalog_samples() {
        for g in [
            cons::sym(3),
            cons::dihedral(6),
            cons::q8(),
            cons::sym(4),
            cons::alt(5),
            cons::sym3_times_c4(),
        ] {
            let t = table_of(g);
            let ct = character_table(t.as_ref()).unwrap();
            assert!(ct.column_orthogonality_holds());
        }
    }

    #[test]
    fn min_real_dimension_examples() {
        let cases: Vec<(crate::group::Group, u64)> = vec![
            (cons::cyclic(2), 1),
            (cons::cyclic(3), 2),
            (cons::sym(3), 1),
            (cons::alt(5), 3),
        ];
        for (g, want) in cases {
            let ct = character_table(table_of(g).as_ref()).unwrap();
            assert_eq!(min_real_dimension(&ct), want);
        }
        let ct = character_table(cons::psl2(7).unwrap().table().unwrap().as_ref()).unwrap();
        // the degree-3 pair is complex (indicator 0), so it contributes 6
        let three = (0..6).find(|&i| ct.degrees[i] == 3).unwrap();
        assert_eq!(ct.indicators[three], 0);
        assert_eq!(min_real_dimension(&ct), 6);
        // consistency with the projective lower bound (q−1)/2 at q = 7
        assert!(min_real_dimension(&ct) >= 3);
    }

    #[test]
    fn zeta_and_epsilon_values() {
        use num_traits::FromPrimitive;
        let ct = character_table(table_of(cons::alt(5)).as_ref()).unwrap();
        let z = degree_zeta_two(&ct);
        assert_eq!(z, BigRational::new(BigInt::from(4769), BigInt::from(3600)));
        let eps = mixing_epsilon(&ct);
        assert!((eps.powi(4) - 1169.0 / 3600.0).abs() < 1e-12);
        // trivial group: ζ = 1, ε = 0
        let ct1 = character_table(table_of(cons::cyclic(1)).as_ref()).unwrap();
        assert_eq!(degree_zeta_two(&ct1), BigRational::from_u64(1).unwrap());
        assert_eq!(mixing_epsilon(&ct1), 0.0);
        // Sym(3): 1 + 1 + 1/4
        let ct3 = character_table(table_of(cons::sym(3)).as_ref()).unwrap();
        assert_eq!(
            degree_zeta_two(&ct3),
            BigRational::new(BigInt::from(9), BigInt::from(4))
        );
    }

    #[test]
    fn class_count_cap_is_enforced() {
        let t = table_of(cons::cyclic(64));
        match character_table(t.as_ref()) {
            Err(Error::TooManyClasses { got, cap }) => {
                assert_eq!(got, 64);
                assert_eq!(cap, MAX_CLASSES);
            }
            other => panic!("expected class-cap error, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn table_is_deterministic() {
        let t = table_of(cons::sym(4));
        let a = character_table(t.as_ref()).unwrap();
        let b = character_table(t.as_ref()).unwrap();
        assert_eq!(a.degrees, b.degrees);
        assert_eq!(a.indicators, b.indicators);
        for (ra, rb) in a.values.iter().zip(&b.values) {
            for (va, vb) in ra.iter().zip(rb) {
                assert_eq!(va, vb);
            }
        }
    }

    #[test]
    fn mixing_samples_respect_the_bound() {
        let t = table_of(cons::alt(5));
        let ct = character_table(t.as_ref()).unwrap();
        let rep = commutator_mixing_sample(t.as_ref(), &ct, 0.1, 20, 5);
        assert!(rep.all_pass);
        // ε(Alt(5)) ≈ 0.755 makes the bound negative here — recorded, not hidden
        assert!(rep.vacuous);
        assert!(rep.min_image > 0);
        let rep2 = commutator_mixing_sample(t.as_ref(), &ct, 0.1, 20, 5);
        assert_eq!(rep.min_image, rep2.min_image);
    }

    #[test]
    fn larger_tables_validate_internally() {
        // internal checks (degree sum, orthogonality, indicators) all ran if
        // construction returned Ok
        for g in [cons::sym(5), cons::psl2(8).unwrap(), cons::sl2(5).unwrap()] {
            let t = g.table().unwrap();
            let ct = character_table(t.as_ref()).unwrap();
            assert_eq!(ct.degrees.iter().map(|d| d * d).sum::<u64>(), t.order() as u64);
        }
    }
}
