use crate::error::{Error, Result};
use crate::perm::Perm;
use num_rational::Ratio;

/// Right action of an enumerated group on a point set, stored extensionally:
/// `images[x][p]` is the image of point p under element x.
pub struct DenseAction {
    pub n_points: usize,
    pub images: Vec<Vec<u32>>,
}

impl DenseAction {
    /// Check the right-action law images[a*b] = images[b] o images[a] on all
    /// pairs, and that the identity acts trivially.
    pub fn verify<G: crate::table::GroupOps>(&self, g: &G) -> Result<()> {
        if self.images.len() != g.order() {
            return Err(Error::Invalid("action table size != group order".into()));
        }
        for p in 0..self.n_points as u32 {
            if self.images[0][p as usize] != p {
                return Err(Error::Invalid("identity moves a point".into()));
            }
        }
        for a in 0..g.order() as u32 {
            for b in 0..g.order() as u32 {
                let ab = g.mul(a, b);
                for p in 0..self.n_points {
                    let step = self.images[b as usize][self.images[a as usize][p] as usize];
                    if self.images[ab as usize][p] != step {
                        return Err(Error::Invalid(format!(
                            "action law fails at ({}, {}, {})",
                            a, b, p
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.n_points];
        let mut orbits = Vec::new();
        for start in 0..self.n_points as u32 {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start as usize] = true;
            let mut head = 0;
            while head < orbit.len() {
                let p = orbit[head];
                head += 1;
                for img in &self.images {
                    let q = img[p as usize];
                    if !seen[q as usize] {
                        seen[q as usize] = true;
                        orbit.push(q);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn moved_points(&self, x: u32) -> usize {
        moved_points(&self.images[x as usize])
    }

    pub fn move_fraction(&self, x: u32) -> Ratio<u64> {
        Ratio::new(self.moved_points(x) as u64, self.n_points as u64)
    }
}

pub fn moved_points(images: &[u32]) -> usize {
    images
        .iter()
        .enumerate()
        .filter(|(i, &v)| *i as u32 != v)
        .count()
}

/// Fraction of points moved by a permutation given extensionally.
pub fn move_fraction_of(images: &[u32]) -> Ratio<u64> {
    Ratio::new(moved_points(images) as u64, images.len() as u64)
}

/// Image vector on block indices induced by a permutation that permutes the
/// given blocks of its domain. Errors if the permutation does not preserve
/// the block system.
pub fn block_action(p: &Perm, blocks: &[&[u32]]) -> Result<Vec<u32>> {
    let mut block_of = std::collections::HashMap::new();
    for (bi, b) in blocks.iter().enumerate() {
        for &pt in *b {
            block_of.insert(pt, bi as u32);
        }
    }
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let first = p.image(b[0]);
        let target = *block_of
            .get(&first)
            .ok_or_else(|| Error::Invalid("block image outside block system".into()))?;
        for &pt in *b {
            if block_of.get(&p.image(pt)) != Some(&target) {
                return Err(Error::Invalid(format!(
                    "permutation {} splits a block",
                    p
                )));
            }
        }
        out.push(target);
    }
    Ok(out)
}
