//! Free words in k variables with ±1 exponents, for verbal-subgroup and
//! width measurements.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::GroupOps;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Word {
    k: usize,
    letters: Vec<(usize, i8)>,
}

impl Word {
    /// Build a word over variables x₀…x_{k−1}, freely reducing adjacent
    /// cancelling letters.
    pub fn new(k: usize, letters: impl IntoIterator<Item = (usize, i8)>) -> Result<Word> {
        if k == 0 {
            return Err(Error::Invalid("a word needs at least one variable".into()));
        }
        let mut red: Vec<(usize, i8)> = Vec::new();
        for (v, e) in letters {
            if v >= k {
                return Err(Error::Invalid(format!("variable x{v} out of range for arity {k}")));
            }
            if e != 1 && e != -1 {
                return Err(Error::Invalid("letter exponents must be ±1".into()));
            }
            if let Some(&(lv, le)) = red.last() {
                if lv == v && le == -e {
                    red.pop();
                    continue;
                }
            }
            red.push((v, e));
        }
        Ok(Word { k, letters: red })
    }

    /// The word x.
    pub fn variable() -> Word {
        Word { k: 1, letters: vec![(0, 1)] }
    }

    /// The word x^n (n ≠ 0).
    pub fn power(n: i32) -> Word {
        let e: i8 = if n > 0 { 1 } else { -1 };
        Word {
            k: 1,
            letters: (0..n.unsigned_abs()).map(|_| (0usize, e)).collect(),
        }
    }

    /// The word [x₀, x₁] = x₀⁻¹x₁⁻¹x₀x₁.
    pub fn commutator() -> Word {
        Word {
            k: 2,
            letters: vec![(0, -1), (1, -1), (0, 1), (1, 1)],
        }
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| !(w[0].0 == w[1].0 && w[0].1 == -w[1].1))
    }

    /// Evaluate at the given assignment of group elements to variables.
    pub fn evaluate<G: GroupOps>(&self, g: &G, args: &[u32]) -> u32 {
        assert_eq!(args.len(), self.k, "assignment arity mismatch");
        let mut acc = 0u32;
        for &(v, e) in &self.letters {
            let x = if e == 1 { args[v] } else { g.inv(args[v]) };
            acc = g.mul(acc, x);
        }
        acc
    }
}
