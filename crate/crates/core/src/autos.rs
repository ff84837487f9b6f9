use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::table::{GroupOps, GroupTable};

/// Automorphism of an enumerated group, stored extensionally as the image
/// vector on element indices. Composition follows the right-action
/// convention: x^(a*b) = (x^a)^b.
#[derive(Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub img: Vec<u32>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism {
            img: (0..n as u32).collect(),
        }
    }

    /// Conjugation x -> g^-1 x g.
    pub fn inner<G: GroupOps>(g: &G, by: u32) -> Self {
        Automorphism {
            img: (0..g.order() as u32).map(|x| g.conj(x, by)).collect(),
        }
    }

    /// Build from an explicit image vector, verifying bijectivity and the
    /// homomorphism law on all pairs.
    pub fn from_images<G: GroupOps>(g: &G, img: Vec<u32>) -> Result<Self> {
        let n = g.order();
        if img.len() != n {
            return Err(Error::Invalid("automorphism image length != order".into()));
        }
        let mut seen = vec![false; n];
        for &v in &img {
            if v as usize >= n || seen[v as usize] {
                return Err(Error::Invalid("automorphism image not a bijection".into()));
            }
            seen[v as usize] = true;
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if img[g.mul(a, b) as usize] != g.mul(img[a as usize], img[b as usize]) {
                    return Err(Error::Invalid(format!(
                        "homomorphism law fails at ({}, {})",
                        a, b
                    )));
                }
            }
        }
        Ok(Automorphism { img })
    }

    /// Conjugation by a permutation normalizing the group (an outer source:
    /// e.g. an odd permutation acting on Alt(n)).
    pub fn from_normalizing_perm(t: &GroupTable, p: &Perm) -> Result<Self> {
        let perms = t
            .perms()
            .ok_or_else(|| Error::Invalid("table has no permutation realization".into()))?;
        let pinv = p.inverse();
        let mut img = Vec::with_capacity(perms.len());
        for x in perms {
            let conj = pinv.mul(x).mul(p);
            match t.index_of_perm(&conj) {
                Some(i) => img.push(i),
                None => {
                    return Err(Error::Invalid(format!(
                        "{} does not normalize the group",
                        p
                    )))
                }
            }
        }
        Ok(Automorphism { img })
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.img[x as usize]
    }

    /// self then other.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            img: self.img.iter().map(|&v| other.img[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut img = vec![0u32; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize] = i as u32;
        }
        Automorphism { img }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// [x, a] = x^-1 * x^a.
    pub fn comm_with<G: GroupOps>(&self, g: &G, x: u32) -> u32 {
        g.mul(g.inv(x), self.apply(x))
    }
}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Automorphism(n={})", self.img.len())
    }
}
