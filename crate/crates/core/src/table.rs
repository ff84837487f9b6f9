use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::stabchain::StabChain;
use std::collections::HashMap;
use std::sync::OnceLock;

/// Default cap for full enumeration (element lists, no dense table).
pub const DEFAULT_ENUM_CAP: usize = 200_000;
/// Default cap for dense multiplication tables (n*n u32 entries).
pub const DEFAULT_TABLE_CAP: usize = 20_000;

/// Minimal interface shared by the dense-table and enumerated backends.
/// Elements are indices 0..order, index 0 is the identity.
pub trait GroupOps: Sync {
    fn order(&self) -> usize;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;
    /// Indices of a generating set (used by closure-type algorithms).
    fn gen_indices(&self) -> &[u32];

    /// x^g = g^-1 x g.
    fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// [x, y] = x^-1 y^-1 x y.
    fn comm(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    fn pow(&self, x: u32, k: i64) -> u32 {
        let (mut base, mut k) = if k < 0 {
            (self.inv(x), (-k) as u64)
        } else {
            (x, k as u64)
        };
        let mut acc = 0u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn elem_order(&self, x: u32) -> u64 {
        let mut k = 1u64;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }
}

/// Fully enumerated finite group with a dense multiplication table.
///
/// Either built from permutation generators (elements are then concrete
/// permutations, available for conjugation by normalizers) or from a raw
/// row-major table.
pub struct GroupTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    gen_idx: Vec<u32>,
    perms: Option<Vec<Perm>>,
    perm_index: Option<HashMap<Perm, u32>>,
    classes_cache: OnceLock<ClassData>,
    order_cache: OnceLock<Vec<u64>>,
}

pub struct ClassData {
    /// Classes sorted: identity class first, then by (size, smallest member).
    pub classes: Vec<Vec<u32>>,
    /// class_of[x] = index into `classes`.
    pub class_of: Vec<u32>,
}

impl GroupTable {
    /// Enumerate the group generated by `gens` and build the dense table.
    pub fn from_perm_gens(degree: usize, gens: &[Perm], cap: usize) -> Result<GroupTable> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::BadPerm(format!(
                    "generator degree {} != {}",
                    g.degree(),
                    degree
                )));
            }
        }
        let chain = StabChain::new(degree, gens);
        let order = chain.order();
        if order > cap as u128 {
            return Err(Error::OrderExceedsCap {
                order: order as u64,
                cap: cap as u64,
            });
        }
        let n = order as usize;
        // breadth-first enumeration, identity first
        let mut perms: Vec<Perm> = vec![Perm::identity(degree)];
        let mut index: HashMap<Perm, u32> = HashMap::with_capacity(n);
        index.insert(perms[0].clone(), 0);
        let mut parent: Vec<(u32, usize)> = vec![(0, usize::MAX)]; // (parent index, gen used)
        let mut head = 0;
        while head < perms.len() {
            let cur = perms[head].clone();
            for (gi, g) in gens.iter().enumerate() {
                let nxt = cur.mul(g);
                if !index.contains_key(&nxt) {
                    index.insert(nxt.clone(), perms.len() as u32);
                    perms.push(nxt);
                    parent.push((head as u32, gi));
                }
            }
            head += 1;
        }
        debug_assert_eq!(perms.len(), n);

        // right-multiplication maps for each generator, then table columns by
        // walking the BFS words (avoids n^2 hash lookups)
        let rmul: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| perms.iter().map(|p| index[&p.mul(g)]).collect())
            .collect();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            mul[i * n] = i as u32; // column of identity
        }
        for j in 1..n {
            let (pj, gi) = parent[j];
            let r = &rmul[gi];
            let pj = pj as usize;
            for i in 0..n {
                mul[i * n + j] = r[mul[i * n + pj] as usize];
            }
        }
        let mut inv = vec![0u32; n];
        for (i, p) in perms.iter().enumerate() {
            inv[i] = index[&p.inverse()];
        }
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok(GroupTable {
            n,
            mul,
            inv,
            gen_idx,
            perms: Some(perms),
            perm_index: Some(index),
            classes_cache: OnceLock::new(),
            order_cache: OnceLock::new(),
        })
    }

    /// Build from a raw row-major table. Index 0 must be the identity.
    /// Validates the Latin-square property, inverses and associativity
    /// (full check below 512 elements, randomized spot check above).
    pub fn from_raw_table(n: usize, mul: Vec<u32>) -> Result<GroupTable> {
        if mul.len() != n * n {
            return Err(Error::BadTable(format!(
                "table length {} != {}^2",
                mul.len(),
                n
            )));
        }
        for (k, &v) in mul.iter().enumerate() {
            if v as usize >= n {
                return Err(Error::BadTable(format!("entry {} out of range at {}", v, k)));
            }
        }
        for i in 0..n {
            if mul[i * n] != i as u32 || mul[i] != i as u32 {
                return Err(Error::BadTable("index 0 is not a two-sided identity".into()));
            }
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                row[mul[i * n + j] as usize] = true;
                col[mul[j * n + i] as usize] = true;
            }
            if row.iter().any(|&b| !b) || col.iter().any(|&b| !b) {
                return Err(Error::BadTable(format!("row/column {} is not a bijection", i)));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if mul[i * n + j] == 0 {
                    if mul[j * n + i] != 0 {
                        return Err(Error::BadTable(format!("one-sided inverse at {}", i)));
                    }
                    inv[i] = j as u32;
                }
            }
        }
        if n <= 512 {
            for a in 0..n {
                for b in 0..n {
                    let ab = mul[a * n + b] as usize;
                    for c in 0..n {
                        if mul[ab * n + c] != mul[a * n + mul[b * n + c] as usize] {
                            return Err(Error::BadTable(format!(
                                "associativity fails at ({}, {}, {})",
                                a, b, c
                            )));
                        }
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x747261);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                let ab = mul[a * n + b] as usize;
                if mul[ab * n + c] != mul[a * n + mul[b * n + c] as usize] {
                    return Err(Error::BadTable(format!(
                        "associativity fails at ({}, {}, {})",
                        a, b, c
                    )));
                }
            }
        }
        // a raw table has no distinguished generators; use all elements
        let gen_idx = (1..n as u32).collect();
        Ok(GroupTable {
            n,
            mul,
            inv,
            gen_idx,
            perms: None,
            perm_index: None,
            classes_cache: OnceLock::new(),
            order_cache: OnceLock::new(),
        })
    }

    /// Direct product; index (a, b) -> a * |B| + b.
    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> GroupTable {
        let n = a.n * b.n;
        let mut mul = vec![0u32; n * n];
        for xa in 0..a.n {
            for xb in 0..b.n {
                let x = xa * b.n + xb;
                for ya in 0..a.n {
                    let za = a.mul[xa * a.n + ya] as usize;
                    for yb in 0..b.n {
                        let y = ya * b.n + yb;
                        mul[x * n + y] = (za * b.n + b.mul[xb * b.n + yb] as usize) as u32;
                    }
                }
            }
        }
        let mut inv = vec![0u32; n];
        for xa in 0..a.n {
            for xb in 0..b.n {
                inv[xa * b.n + xb] = a.inv[xa] * b.n as u32 + b.inv[xb];
            }
        }
        let mut gen_idx = Vec::new();
        for &g in &a.gen_idx {
            gen_idx.push(g * b.n as u32);
        }
        for &g in &b.gen_idx {
            gen_idx.push(g);
        }
        GroupTable {
            n,
            mul,
            inv,
            gen_idx,
            perms: None,
            perm_index: None,
            classes_cache: OnceLock::new(),
            order_cache: OnceLock::new(),
        }
    }

    /// Rebuild with an explicit generating set (affects closure algorithms
    /// and the BFS conventions only; the table itself is unchanged).
    pub fn with_gens(mut self, gen_idx: Vec<u32>) -> GroupTable {
        self.gen_idx = gen_idx;
        self
    }

    /// Assemble a table from parts already known to be a valid group
    /// (quotients and subgroup reindexings use this; callers guarantee the
    /// axioms hold).
    pub(crate) fn from_parts(n: usize, mul: Vec<u32>, inv: Vec<u32>, gen_idx: Vec<u32>) -> GroupTable {
        debug_assert_eq!(mul.len(), n * n);
        GroupTable {
            n,
            mul,
            inv,
            gen_idx,
            perms: None,
            perm_index: None,
            classes_cache: OnceLock::new(),
            order_cache: OnceLock::new(),
        }
    }

    pub fn perm(&self, i: u32) -> Option<&Perm> {
        self.perms.as_ref().map(|ps| &ps[i as usize])
    }

    pub fn perms(&self) -> Option<&[Perm]> {
        self.perms.as_deref()
    }

    pub fn index_of_perm(&self, p: &Perm) -> Option<u32> {
        self.perm_index.as_ref().and_then(|ix| ix.get(p).copied())
    }

    pub fn mul_row(&self, a: u32) -> &[u32] {
        &self.mul[a as usize * self.n..(a as usize + 1) * self.n]
    }

    /// Conjugacy classes (cached). Identity class first, then ordered by
    /// (size, smallest member index).
    pub fn classes(&self) -> &ClassData {
        self.classes_cache.get_or_init(|| {
            let n = self.n;
            let mut class_of = vec![u32::MAX; n];
            let mut classes: Vec<Vec<u32>> = Vec::new();
            for x in 0..n as u32 {
                if class_of[x as usize] != u32::MAX {
                    continue;
                }
                let cid = classes.len() as u32;
                let mut orbit = vec![x];
                class_of[x as usize] = cid;
                let mut head = 0;
                while head < orbit.len() {
                    let y = orbit[head];
                    head += 1;
                    for &g in &self.gen_idx {
                        let z = self.conj(y, g);
                        if class_of[z as usize] == u32::MAX {
                            class_of[z as usize] = cid;
                            orbit.push(z);
                        }
                    }
                }
                orbit.sort_unstable();
                classes.push(orbit);
            }
            // stable renumbering: identity first, then (size, min member)
            let mut order: Vec<usize> = (0..classes.len()).collect();
            order.sort_by_key(|&c| {
                let first = classes[c][0];
                (first != 0, classes[c].len(), first)
            });
            let classes: Vec<Vec<u32>> = order.iter().map(|&c| classes[c].clone()).collect();
            let mut class_of = vec![0u32; n];
            for (ci, cl) in classes.iter().enumerate() {
                for &x in cl {
                    class_of[x as usize] = ci as u32;
                }
            }
            ClassData { classes, class_of }
        })
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes().classes.iter().map(|c| c.len()).collect()
    }

    /// Orders of all elements (cached).
    pub fn element_orders(&self) -> &[u64] {
        self.order_cache.get_or_init(|| {
            (0..self.n as u32).map(|x| self.elem_order(x)).collect()
        })
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders()
            .iter()
            .fold(1u64, |a, &b| num_integer::lcm(a, b))
    }

    pub fn center(&self) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&x| (0..self.n as u32).all(|y| self.mul(x, y) == self.mul(y, x)))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.gen_idx
            .iter()
            .all(|&a| self.gen_idx.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

impl GroupOps for GroupTable {
    fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    fn gen_indices(&self) -> &[u32] {
        &self.gen_idx
    }
}
