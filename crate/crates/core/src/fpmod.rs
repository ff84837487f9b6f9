//! Dense matrices over a prime field F_p and group modules built from them.
//!
//! Everything here is exact integer arithmetic mod p; p stays small (the
//! primes dividing catalog group orders), so values fit comfortably in u64
//! without overflow during multiply-reduce.

use crate::error::{Error, Result};

/// Row-major n×n matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub p: u64,
    pub n: usize,
    a: Vec<u64>,
}

impl FpMat {
    pub fn zero(p: u64, n: usize) -> FpMat {
        FpMat {
            p,
            n,
            a: vec![0; n * n],
        }
    }

    pub fn identity(p: u64, n: usize) -> FpMat {
        let mut m = FpMat::zero(p, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<FpMat> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix rows must be square".into()));
        }
        let a = rows.iter().flatten().map(|&x| x % p).collect();
        Ok(FpMat { p, n, a })
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.n + j] = v % self.p;
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.n, other.n);
        assert_eq!(self.p, other.p);
        let n = self.n;
        let mut out = FpMat::zero(self.p, n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] = (out.a[i * n + j] + aik * other.a[k * n + j]) % self.p;
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == FpMat::identity(self.p, self.n)
    }

    /// self − I (entrywise, mod p).
    pub fn minus_identity(&self) -> FpMat {
        let mut m = self.clone();
        for i in 0..self.n {
            let v = m.get(i, i);
            m.set(i, i, (v + self.p - 1) % self.p);
        }
        m
    }

    /// Rank over F_p by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let p = self.p;
        let mut a = self.a.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            // find a pivot in this column at or below `row`
            let Some(pr) = (row..n).find(|&r| a[r * n + col] != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..n {
                    a.swap(row * n + j, pr * n + j);
                }
            }
            let inv = mod_inv(a[row * n + col], p);
            for j in col..n {
                a[row * n + j] = a[row * n + j] * inv % p;
            }
            for r in 0..n {
                if r != row && a[r * n + col] != 0 {
                    let f = a[r * n + col];
                    for j in col..n {
                        a[r * n + j] = (a[r * n + j] + (p - f) * a[row * n + j]) % p;
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == n {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }
}

/// Rank of a rectangular matrix given as rows of width `n` (entries already
/// reduced mod p). Used for stacked matrices, e.g. common fixed spaces.
pub fn rank_of_rows(p: u64, n: usize, rows: &[Vec<u64>]) -> usize {
    let m = rows.len();
    let mut a: Vec<u64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    assert_eq!(a.len(), m * n);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m).find(|&r| a[r * n + col] != 0) else {
            continue;
        };
        if pr != row {
            for j in 0..n {
                a.swap(row * n + j, pr * n + j);
            }
        }
        let inv = mod_inv(a[row * n + col], p);
        for j in col..n {
            a[row * n + j] = a[row * n + j] * inv % p;
        }
        for r in 0..m {
            if r != row && a[r * n + col] != 0 {
                let f = a[r * n + col];
                for j in col..n {
                    a[r * n + j] = (a[r * n + j] + (p - f) * a[row * n + j]) % p;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == m {
            break;
        }
    }
    rank
}

fn mod_inv(x: u64, p: u64) -> u64 {
    // Fermat: x^(p-2) mod p
    let mut base = x % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// A finite-dimensional module over F_p with one action matrix per generator
/// of the acting group; matrices for arbitrary elements come from generator
/// words.
#[derive(Clone, Debug)]
pub struct FpModule {
    pub p: u64,
    pub dim: usize,
    pub gen_mats: Vec<FpMat>,
}

impl FpModule {
    pub fn new(p: u64, dim: usize, gen_mats: Vec<FpMat>) -> Result<FpModule> {
        for m in &gen_mats {
            if m.p != p || m.n != dim {
                return Err(Error::Invalid("module matrix shape mismatch".into()));
            }
            if !m.is_invertible() {
                return Err(Error::Invalid("module action matrix is singular".into()));
            }
        }
        Ok(FpModule { p, dim, gen_mats })
    }

    /// Matrix of a word in the generators (indices into gen_mats), applied
    /// left to right to match the group's right-action composition order.
    pub fn matrix_of_word(&self, word: &[usize]) -> FpMat {
        let mut m = FpMat::identity(self.p, self.dim);
        for &g in word {
            m = m.mul(&self.gen_mats[g]);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_inverse_basics() {
        let m = FpMat::from_rows(3, &[vec![1, 1], vec![1, 2]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(m.is_invertible());
        let s = FpMat::from_rows(3, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.rank(), 1);
        assert!(!s.is_invertible());
        assert_eq!(FpMat::zero(5, 4).rank(), 0);
        assert_eq!(FpMat::identity(7, 5).rank(), 5);
    }

    #[test]
    fn minus_identity_measures_fixed_space() {
        // swap matrix on F_2^2: rank(A - I) = 1
        let swap = FpMat::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.minus_identity().rank(), 1);
        // inversion on F_3 (1-dim): (-1) - 1 = -2 = 1 mod 3, rank 1
        let inv = FpMat::from_rows(3, &[vec![2]]).unwrap();
        assert_eq!(inv.minus_identity().rank(), 1);
        let id = FpMat::identity(3, 4);
        assert_eq!(id.minus_identity().rank(), 0);
    }

    #[test]
    fn matrix_products_mod_p() {
        let a = FpMat::from_rows(5, &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = FpMat::from_rows(5, &[vec![1, 0], vec![1, 1]]).unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab, FpMat::from_rows(5, &[vec![2, 1], vec![1, 1]]).unwrap());
        // order of the unipotent a is p
        let mut m = a.clone();
        for _ in 0..4 {
            m = m.mul(&a);
        }
        assert!(m.is_identity());
    }

    #[test]
    fn module_validates_and_extends_words() {
        let a = FpMat::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let v = FpModule::new(2, 2, vec![a.clone()]).unwrap();
        assert!(v.matrix_of_word(&[0, 0]).is_identity());
        assert_eq!(v.matrix_of_word(&[0]), a);
        let bad = FpMat::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(FpModule::new(2, 2, vec![bad]).is_err());
    }

    #[cfg(test)]
    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // rank is invariant under multiplying by an invertible matrix
            #[test]
            fn rank_invariant_under_row_ops(seed in 0u64..500) {
                let p = 5u64;
                let n = 3usize;
                // derive a deterministic matrix from the seed
                let mut vals = Vec::new();
                let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
                for _ in 0..n * n {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    vals.push((s >> 33) % p);
                }
                let m = FpMat { p, n, a: vals };
                // elementary row-addition matrix
                let mut e = FpMat::identity(p, n);
                e.set(0, 1, 1 + seed % (p - 1));
                prop_assert!(e.is_invertible());
                prop_assert_eq!(e.mul(&m).rank(), m.rank());
                prop_assert_eq!(m.mul(&e).rank(), m.rank());
            }
        }
    }
}
