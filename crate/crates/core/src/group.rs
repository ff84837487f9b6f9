use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::rng::PrWalkPerm;
use crate::stabchain::StabChain;
use crate::table::{GroupOps, GroupTable, DEFAULT_ENUM_CAP, DEFAULT_TABLE_CAP};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// Enumerated group without a dense table: elements are concrete
/// permutations, multiplication composes and looks the index back up.
/// Slower per operation than a table but fits groups up to the enumeration
/// cap.
pub struct EnumGroup {
    perms: Vec<Perm>,
    index: HashMap<Perm, u32>,
    inv: Vec<u32>,
    gen_idx: Vec<u32>,
}

impl EnumGroup {
    pub fn from_perm_gens(degree: usize, gens: &[Perm], cap: usize) -> Result<EnumGroup> {
        let chain = StabChain::new(degree, gens);
        let order = chain.order();
        if order > cap as u128 {
            return Err(Error::OrderExceedsCap {
                order: order as u64,
                cap: cap as u64,
            });
        }
        let n = order as usize;
        let mut perms = vec![Perm::identity(degree)];
        let mut index = HashMap::with_capacity(n);
        index.insert(perms[0].clone(), 0u32);
        let mut head = 0;
        while head < perms.len() {
            let cur = perms[head].clone();
            for g in gens {
                let nxt = cur.mul(g);
                if !index.contains_key(&nxt) {
                    index.insert(nxt.clone(), perms.len() as u32);
                    perms.push(nxt);
                }
            }
            head += 1;
        }
        let inv = perms.iter().map(|p| index[&p.inverse()]).collect();
        let gen_idx = gens
            .iter()
            .map(|g| index[g])
            .filter(|&i| i != 0)
            .collect();
        Ok(EnumGroup {
            perms,
            index,
            inv,
            gen_idx,
        })
    }

    pub fn perm(&self, i: u32) -> &Perm {
        &self.perms[i as usize]
    }

    pub fn index_of_perm(&self, p: &Perm) -> Option<u32> {
        self.index.get(p).copied()
    }
}

impl GroupOps for EnumGroup {
    fn order(&self) -> usize {
        self.perms.len()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.index[&self.perms[a as usize].mul(&self.perms[b as usize])]
    }

    fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    fn gen_indices(&self) -> &[u32] {
        &self.gen_idx
    }
}

enum Backend {
    Perm {
        degree: usize,
        gens: Vec<Perm>,
        chain: StabChain,
    },
    Table(Arc<GroupTable>),
}

/// A finite group with whatever backends its size permits: a stabilizer
/// chain for order/membership (permutation input), a full enumeration below
/// `enum_cap`, and a dense multiplication table below `table_cap`.
pub struct Group {
    pub name: String,
    backend: Backend,
    table_cap: usize,
    enum_cap: usize,
    table: OnceLock<Result<Arc<GroupTable>>>,
    enumeration: OnceLock<Result<Arc<EnumGroup>>>,
}

impl Group {
    pub fn from_perm_gens(name: &str, degree: usize, gens: Vec<Perm>) -> Result<Group> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::BadPerm(format!(
                    "generator degree {} != {}",
                    g.degree(),
                    degree
                )));
            }
        }
        let chain = StabChain::new(degree, &gens);
        Ok(Group {
            name: name.to_string(),
            backend: Backend::Perm {
                degree,
                gens,
                chain,
            },
            table_cap: DEFAULT_TABLE_CAP,
            enum_cap: DEFAULT_ENUM_CAP,
            table: OnceLock::new(),
            enumeration: OnceLock::new(),
        })
    }

    pub fn from_table(name: &str, table: GroupTable) -> Group {
        Group {
            name: name.to_string(),
            backend: Backend::Table(Arc::new(table)),
            table_cap: DEFAULT_TABLE_CAP,
            enum_cap: DEFAULT_ENUM_CAP,
            table: OnceLock::new(),
            enumeration: OnceLock::new(),
        }
    }

    pub fn with_caps(mut self, table_cap: usize, enum_cap: usize) -> Group {
        self.table_cap = table_cap;
        self.enum_cap = enum_cap;
        self
    }

    pub fn order(&self) -> u128 {
        match &self.backend {
            Backend::Perm { chain, .. } => chain.order(),
            Backend::Table(t) => t.order() as u128,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.backend {
            Backend::Perm { degree, .. } => Some(*degree),
            Backend::Table(t) => t.perm(0).map(|p| p.degree()),
        }
    }

    pub fn generators(&self) -> Option<&[Perm]> {
        match &self.backend {
            Backend::Perm { gens, .. } => Some(gens),
            Backend::Table(_) => None,
        }
    }

    pub fn contains_perm(&self, p: &Perm) -> bool {
        match &self.backend {
            Backend::Perm { chain, .. } => chain.contains(p),
            Backend::Table(t) => t.index_of_perm(p).is_some(),
        }
    }

    pub fn has_table(&self) -> bool {
        match &self.backend {
            Backend::Table(_) => true,
            Backend::Perm { chain, .. } => chain.order() <= self.table_cap as u128,
        }
    }

    /// Dense table, built on first use when the order is within the cap.
    pub fn table(&self) -> Result<Arc<GroupTable>> {
        if let Backend::Table(t) = &self.backend {
            return Ok(t.clone());
        }
        self.table
            .get_or_init(|| match &self.backend {
                Backend::Perm { degree, gens, .. } => {
                    GroupTable::from_perm_gens(*degree, gens, self.table_cap).map(Arc::new)
                }
                Backend::Table(t) => Ok(t.clone()),
            })
            .as_ref()
            .map(Arc::clone)
            .map_err(clone_err)
    }

    /// Enumeration (no dense table), for groups between the two caps.
    pub fn enumeration(&self) -> Result<Arc<EnumGroup>> {
        self.enumeration
            .get_or_init(|| match &self.backend {
                Backend::Perm { degree, gens, .. } => {
                    EnumGroup::from_perm_gens(*degree, gens, self.enum_cap).map(Arc::new)
                }
                Backend::Table(_) => Err(Error::Invalid(
                    "table-backed group has no separate enumeration".into(),
                )),
            })
            .as_ref()
            .map(Arc::clone)
            .map_err(clone_err)
    }

    /// Product-replacement walk producing random permutations (perm backend).
    /// For index walks, fetch the table and use `PrWalk::new` directly.
    pub fn pr_walk_perm(&self, rng: ChaCha8Rng) -> Result<PrWalkPerm> {
        match &self.backend {
            Backend::Perm { degree, gens, .. } => Ok(PrWalkPerm::new(*degree, gens, rng)),
            Backend::Table(_) => Err(Error::Invalid("no permutation backend".into())),
        }
    }
}

fn clone_err(e: &Error) -> Error {
    Error::Invalid(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::PrWalk;

    fn perms(gens: &[&str], degree: usize) -> Vec<Perm> {
        gens.iter()
            .map(|s| Perm::from_cycles(s, degree).unwrap())
            .collect()
    }

    #[test]
    fn group_backends() {
        let g = Group::from_perm_gens("alt5", 5, perms(&["(1 2 3)", "(1 2 3 4 5)"], 5)).unwrap();
        assert_eq!(g.order(), 60);
        assert!(g.has_table());
        let t = g.table().unwrap();
        assert_eq!(t.order(), 60);
        let e = g.enumeration().unwrap();
        assert_eq!(e.order(), 60);
        // enum and table agree on arithmetic
        for a in [0u32, 5, 17, 59] {
            for b in [1u32, 8, 33] {
                let pa = e.perm(a).clone();
                let pb = e.perm(b).clone();
                let prod = pa.mul(&pb);
                assert_eq!(e.index_of_perm(&prod), Some(e.mul(a, b)));
                let ta = t.index_of_perm(&pa).unwrap();
                let tb = t.index_of_perm(&pb).unwrap();
                assert_eq!(t.perm(t.mul(ta, tb)).unwrap(), &prod);
            }
        }
    }

    #[test]
    fn caps_respected() {
        let g = Group::from_perm_gens("sym5", 5, perms(&["(1 2)", "(1 2 3 4 5)"], 5))
            .unwrap()
            .with_caps(100, 100);
        assert!(!g.has_table());
        assert!(matches!(
            g.table(),
            Err(Error::Invalid(_)) | Err(Error::OrderExceedsCap { .. })
        ));
        assert!(g.enumeration().is_err());
        // order and membership still work off the chain
        assert_eq!(g.order(), 120);
        assert!(g.contains_perm(&Perm::from_cycles("(1 2)", 5).unwrap()));
    }

    #[test]
    fn random_walks_stay_inside() {
        let g = Group::from_perm_gens("alt5", 5, perms(&["(1 2 3)", "(1 2 3 4 5)"], 5)).unwrap();
        let mut w = g.pr_walk_perm(crate::rng::substream(3, "g", 0)).unwrap();
        for _ in 0..40 {
            assert!(g.contains_perm(&w.next_element()));
        }
        let t = g.table().unwrap();
        let mut wt = PrWalk::new(&*t, crate::rng::substream(3, "g", 1));
        for _ in 0..40 {
            assert!((wt.next_element() as usize) < 60);
        }
    }
}
