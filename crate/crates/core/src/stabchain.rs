use crate::perm::Perm;

/// One level of a stabilizer chain: a base point, the generators first added
/// at this level (they fix all earlier base points), and a transversal mapping
/// each orbit point w to a permutation carrying the base point to w.
///
/// The group *at* a level is generated by its own gens together with every
/// deeper level's gens, since those also fix this level's prefix of the base.
/// Orbits must therefore be rebuilt with that union, not `gens` alone.
struct Level {
    point: u32,
    gens: Vec<Perm>,
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn rebuild_orbit(&mut self, degree: usize, gens: &[Perm]) {
        let mut tr: Vec<Option<Perm>> = vec![None; degree];
        tr[self.point as usize] = Some(Perm::identity(degree));
        let mut queue = vec![self.point];
        while let Some(w) = queue.pop() {
            let u = tr[w as usize].clone().unwrap();
            for s in gens {
                let d = s.image(w);
                if tr[d as usize].is_none() {
                    tr[d as usize] = Some(u.mul(s));
                    queue.push(d);
                }
            }
        }
        self.transversal = tr;
    }

    fn orbit_size(&self) -> usize {
        self.transversal.iter().filter(|t| t.is_some()).count()
    }
}

/// Schreier-Sims stabilizer chain. Deterministic, rebuilt-until-stable
/// variant: cheap to state, fast enough for the degrees used here.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if !gens.is_empty() {
            chain.push_level_for(&gens);
            chain.levels[0].gens = gens;
            chain.rebuild_level(0);
            chain.stabilize();
        }
        chain
    }

    /// Generators of the group at level `li`: everything first added at this
    /// level or deeper.
    fn gens_at(&self, li: usize) -> Vec<Perm> {
        self.levels[li..]
            .iter()
            .flat_map(|lv| lv.gens.iter().cloned())
            .collect()
    }

    fn rebuild_level(&mut self, li: usize) {
        let gens = self.gens_at(li);
        self.levels[li].rebuild_orbit(self.degree, &gens);
    }

    /// Create a new bottom level whose base point is moved by some generator.
    fn push_level_for(&mut self, gens: &[Perm]) {
        let point = (0..self.degree as u32)
            .find(|&w| gens.iter().any(|g| g.image(w) != w))
            .expect("nontrivial generator must move a point");
        self.levels.push(Level {
            point,
            gens: Vec::new(),
            transversal: Vec::new(),
        });
    }

    /// Verify every Schreier generator sifts to the identity; on failure add
    /// the residue as a generator where it got stuck and start over.
    fn stabilize(&mut self) {
        'outer: loop {
            for li in 0..self.levels.len() {
                let gens = self.gens_at(li);
                let orbit: Vec<u32> = {
                    let lv = &self.levels[li];
                    (0..self.degree as u32)
                        .filter(|&w| lv.transversal[w as usize].is_some())
                        .collect()
                };
                for w in orbit {
                    for s in &gens {
                        let u = self.levels[li].transversal[w as usize].clone().unwrap();
                        let d = s.image(w);
                        let u_d = self.levels[li].transversal[d as usize]
                            .clone()
                            .expect("orbit closed under generators");
                        let schreier = u.mul(s).mul(&u_d.inverse());
                        let (residue, stuck) = self.strip(schreier, li + 1);
                        if !residue.is_identity() {
                            if stuck == self.levels.len() {
                                self.push_level_for(std::slice::from_ref(&residue));
                            }
                            self.levels[stuck].gens.push(residue);
                            // The new generator lives in every level's group
                            // from li+1 down to `stuck`, so their orbits may
                            // all grow.
                            for j in li + 1..=stuck {
                                self.rebuild_level(j);
                            }
                            continue 'outer;
                        }
                    }
                }
            }
            return;
        }
    }

    /// Sift p through levels starting at `from`; returns the residue and the
    /// level at which sifting stopped.
    fn strip(&self, mut p: Perm, from: usize) -> (Perm, usize) {
        for li in from..self.levels.len() {
            let lv = &self.levels[li];
            let d = p.image(lv.point);
            match &lv.transversal[d as usize] {
                Some(u) => p = p.mul(&u.inverse()),
                None => return (p, li),
            }
        }
        (p, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|lv| lv.orbit_size() as u128)
            .product()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.strip(p.clone(), 0);
        residue.is_identity()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|lv| lv.point).collect()
    }

    /// Uniformly random element: multiply one uniformly chosen transversal
    /// representative per level (unique factorization makes this exactly
    /// uniform over the group).
    pub fn uniform_element<R: rand::Rng>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for lv in self.levels.iter().rev() {
            let orbit: Vec<&Perm> = lv.transversal.iter().flatten().collect();
            let u = orbit[rng.gen_range(0..orbit.len())];
            g = g.mul(u);
        }
        g
    }

    /// Rank of `p` in the group under the chain's coset coordinates: each
    /// level contributes the position of the stripped point within that
    /// level's orbit, combined in mixed radix. Bijective onto 0..order, so it
    /// doubles as a perfect hash for membership bitmaps without enumerating
    /// the group. Returns None for non-members.
    pub fn coords_index(&self, p: &Perm) -> Option<u128> {
        if p.degree() != self.degree {
            return None;
        }
        let mut idx: u128 = 0;
        let mut q = p.clone();
        for lv in &self.levels {
            let d = q.image(lv.point);
            let u = lv.transversal[d as usize].as_ref()?;
            let rank = lv.transversal[..d as usize]
                .iter()
                .filter(|t| t.is_some())
                .count() as u128;
            idx = idx * lv.orbit_size() as u128 + rank;
            q = q.mul(&u.inverse());
        }
        if q.is_identity() {
            Some(idx)
        } else {
            None
        }
    }
}

/// Generators for the subgroup fixing every point of `fixed`, obtained by
/// iterated Schreier generator extraction (one orbit/transversal per point).
/// The returned set can be large but is exact.
pub fn pointwise_stabilizer(degree: usize, gens: &[Perm], fixed: &[u32]) -> Vec<Perm> {
    let mut current: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    for &pt in fixed {
        if current.iter().all(|g| g.image(pt) == pt) {
            continue;
        }
        // orbit of pt with a transversal under `current`
        let mut tr: Vec<Option<Perm>> = vec![None; degree];
        tr[pt as usize] = Some(Perm::identity(degree));
        let mut queue = vec![pt];
        while let Some(w) = queue.pop() {
            let u = tr[w as usize].clone().unwrap();
            for s in &current {
                let d = s.image(w);
                if tr[d as usize].is_none() {
                    tr[d as usize] = Some(u.mul(s));
                    queue.push(d);
                }
            }
        }
        let mut next: Vec<Perm> = Vec::new();
        for w in 0..degree as u32 {
            let Some(u) = tr[w as usize].clone() else {
                continue;
            };
            for s in &current {
                let d = s.image(w);
                let u_d = tr[d as usize].clone().unwrap();
                let schreier = u.mul(s).mul(&u_d.inverse());
                if !schreier.is_identity() && !next.contains(&schreier) {
                    next.push(schreier);
                }
            }
        }
        // Schreier sets multiply in size per fixed point; cut each round back
        // to an irredundant set before the next one.
        current = reduce_gens(degree, &next);
    }
    current
}

/// Greedy irredundant generating set: keep a generator only if it is not
/// already in the group generated by those kept so far.
pub fn reduce_gens(degree: usize, gens: &[Perm]) -> Vec<Perm> {
    let mut kept: Vec<Perm> = Vec::new();
    let mut chain = StabChain::new(degree, &kept);
    for g in gens {
        if g.is_identity() || chain.contains(g) {
            continue;
        }
        kept.push(g.clone());
        chain = StabChain::new(degree, &kept);
    }
    kept
}

/// Generators of the normal closure of `seed` under the group generated by
/// `ambient_gens`, computed entirely through membership sifting — no element
/// enumeration, so it works at any group order.
pub fn normal_closure_gens(degree: usize, ambient_gens: &[Perm], seed: &[Perm]) -> Vec<Perm> {
    let mut gens = reduce_gens(degree, seed);
    let mut chain = StabChain::new(degree, &gens);
    loop {
        let mut grew = false;
        for h in gens.clone() {
            for g in ambient_gens {
                let c = h.conj(g);
                if !chain.contains(&c) {
                    gens.push(c);
                    chain = StabChain::new(degree, &gens);
                    grew = true;
                }
            }
        }
        if !grew {
            return gens;
        }
    }
}
