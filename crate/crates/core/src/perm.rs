use crate::error::{Error, Result};
use std::fmt;

/// Permutation of {0, .., n-1}, stored as the image vector.
///
/// Products follow the right-action convention used throughout the crate:
/// `(p * q)` means "apply p, then q", so `(p * q).image(w) == q.image(p.image(w))`.
/// Cycle notation at the text boundary is 1-based; indices in memory are 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            img: (0..degree as u32).collect(),
        }
    }

    /// Build from an image vector, checking bijectivity.
    pub fn from_images(img: Vec<u32>) -> Result<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &v in &img {
            if (v as usize) >= n || seen[v as usize] {
                return Err(Error::BadPerm(format!(
                    "image vector {:?} is not a bijection on 0..{}",
                    img, n
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Perm { img })
    }

    /// Parse disjoint-or-not cycles like "(1 2 3)(4 5)"; points are 1-based.
    /// Whitespace or commas separate points. "()" or "" is the identity.
    pub fn from_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Perm { img });
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            while i < bytes.len() && (bytes[i] as char).is_whitespace() {
                i += 1;
            }
            if i >= bytes.len() {
                break;
            }
            if bytes[i] != b'(' {
                return Err(Error::BadCycles(format!("expected '(' in {:?}", s)));
            }
            let close = s[i..]
                .find(')')
                .ok_or_else(|| Error::BadCycles(format!("unclosed cycle in {:?}", s)))?
                + i;
            let inner = &s[i + 1..close];
            let pts: Vec<usize> = inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::BadCycles(format!("bad point {:?} in {:?}", t, s)))
                })
                .collect::<Result<_>>()?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(Error::BadCycles(format!(
                        "point {} out of range 1..={}",
                        p, degree
                    )));
                }
            }
            // cycle (a b c): a->b, b->c, c->a, composed onto what we have so far
            if pts.len() >= 2 {
                let mut cyc_img: Vec<u32> = (0..degree as u32).collect();
                for w in 0..pts.len() {
                    let from = pts[w] - 1;
                    let to = pts[(w + 1) % pts.len()] - 1;
                    cyc_img[from] = to as u32;
                }
                let mut dup = vec![false; degree];
                for &p in &pts {
                    if dup[p - 1] {
                        return Err(Error::BadCycles(format!("repeated point {} in {:?}", p, s)));
                    }
                    dup[p - 1] = true;
                }
                for v in img.iter_mut() {
                    *v = cyc_img[*v as usize];
                }
            }
            i = close + 1;
        }
        Ok(Perm { img })
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn image(&self, point: u32) -> u32 {
        self.img[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// self * other, i.e. apply self first then other.
    pub fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            img: self.img.iter().map(|&v| other.img[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u32; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize] = i as u32;
        }
        Perm { img }
    }

    /// g^-1 * self * g (right conjugation).
    pub fn conj(&self, g: &Perm) -> Perm {
        g.inverse().mul(self).mul(g)
    }

    pub fn order(&self) -> u64 {
        let mut ord: u64 = 1;
        let mut seen = vec![false; self.img.len()];
        for start in 0..self.img.len() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.img[p] as usize;
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut seen = vec![false; self.img.len()];
        for start in 0..self.img.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cyc.push(p as u32);
                p = self.img[p] as usize;
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Number of moved points.
    pub fn support(&self) -> usize {
        self.img
            .iter()
            .enumerate()
            .filter(|(i, &v)| *i as u32 != v)
            .count()
    }

    /// Pad with fixed points up to `degree`.
    pub fn extend_degree(&self, degree: usize) -> Perm {
        let mut img = self.img.clone();
        for i in img.len()..degree {
            img.push(i as u32);
        }
        Perm { img }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (k, p) in cyc.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
