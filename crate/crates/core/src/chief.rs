//! Chief series, chief-factor classification, and the characteristic
//! subgroups cut out by centralizers of those factors.
//!
//! Two code paths share the same report shape:
//!
//! * the table path works on a fully enumerated group and classifies every
//!   factor exactly (action matrices for abelian factors, simple-factor
//!   decomposition plus the factor permutation for semisimple ones);
//! * the chain path works on permutation generators alone via stabilizer
//!   chains, for groups past the enumeration cap. It refuses (rather than
//!   guesses) on shapes it cannot certify.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::elset::ElementSet;
use crate::error::{Error, Result};
use crate::fpmod::{FpMat, FpModule};
use crate::perm::Perm;
use crate::stabchain::{normal_closure_gens, pointwise_stabilizer, reduce_gens, StabChain};
use crate::subgroup::{
    self, centralizer, closure, comm_subgroup, derived, is_normal, join, normal_closure, quotient,
    squares_subgroup, subgroup_table, Subgrp,
};
use crate::table::{GroupOps, GroupTable};

// ---------------------------------------------------------------------------
// table path
// ---------------------------------------------------------------------------

/// Abelian chief factor B/A as an F_p space with the ambient conjugation
/// action. Everything is expressed inside the quotient G/A.
pub struct AbelianData {
    pub p: u64,
    pub dim: usize,
    /// true when conjugation by every group element is trivial on the factor
    pub central: bool,
    quotient: Arc<GroupTable>,
    proj: Vec<u32>,
    basis: Vec<u32>,
    coords: HashMap<u32, Vec<u64>>,
}

impl AbelianData {
    /// Matrix (rows = images of basis vectors) of conjugation by the ambient
    /// element y. Row-vector convention, so matrix_of(x·y) =
    /// matrix_of(x)·matrix_of(y).
    pub fn matrix_of(&self, y: u32) -> FpMat {
        let q = self.proj[y as usize];
        let mut m = FpMat::zero(self.p, self.dim);
        for (i, &b) in self.basis.iter().enumerate() {
            let img = self.quotient.conj(b, q);
            let c = &self.coords[&img];
            for (j, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Package the action of the given ambient elements as a module.
    pub fn module(&self, acting: &[u32]) -> Result<FpModule> {
        let mats = acting.iter().map(|&y| self.matrix_of(y)).collect();
        FpModule::new(self.p, self.dim, mats)
    }
}

/// Semisimple chief factor B/A: its simple factors as subgroups of G/A, and
/// the permutation the ambient group induces on them.
pub struct SemisimpleData {
    quotient: Arc<GroupTable>,
    proj: Vec<u32>,
    m_elements: ElementSet,
    pub factors: Vec<Subgrp>,
    pub transitive: bool,
}

impl SemisimpleData {
    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    /// |B/A|
    pub fn factor_order(&self) -> usize {
        self.m_elements.len()
    }

    /// |C_{B/A}(y)| — elements of the factor fixed by conjugation by y.
    pub fn centralizer_order(&self, y: u32) -> usize {
        let yq = self.proj[y as usize];
        self.m_elements
            .iter()
            .filter(|&m| self.quotient.comm(m, yq) == 0)
            .count()
    }

    /// Index permutation induced by conjugation by the ambient element y.
    pub fn factor_perm_of(&self, y: u32) -> Vec<usize> {
        let q = self.proj[y as usize];
        self.factors
            .iter()
            .map(|f| {
                let probe = self.quotient.conj(f.gens[0], q);
                self.factors
                    .iter()
                    .position(|h| h.contains(probe))
                    .expect("conjugation permutes the simple factors")
            })
            .collect()
    }

    /// Number of simple factors moved by y.
    pub fn moved_factors(&self, y: u32) -> usize {
        self.factor_perm_of(y)
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i != j)
            .count()
    }
}

pub enum FactorKind {
    Abelian(AbelianData),
    Semisimple(SemisimpleData),
}

pub struct ChiefFactor {
    /// A and B with A < B ≤ G, B/A minimal normal in G/A; element sets are in
    /// ambient indices.
    pub lower: Subgrp,
    pub upper: Subgrp,
    pub kind: FactorKind,
    /// C_G(B/A) = {g : [B,g] ≤ A}
    pub centralizer: Subgrp,
}

impl ChiefFactor {
    pub fn order(&self) -> u128 {
        self.upper.order() as u128 / self.lower.order() as u128
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, FactorKind::Abelian(_))
    }

    pub fn composition_length(&self) -> usize {
        match &self.kind {
            FactorKind::Abelian(a) => a.dim,
            FactorKind::Semisimple(s) => s.n_factors(),
        }
    }

    /// Non-abelian with at most two simple factors.
    pub fn is_bad(&self) -> bool {
        match &self.kind {
            FactorKind::Abelian(_) => false,
            FactorKind::Semisimple(s) => s.n_factors() <= 2,
        }
    }

    pub fn is_central(&self) -> bool {
        match &self.kind {
            FactorKind::Abelian(a) => a.central,
            FactorKind::Semisimple(_) => false,
        }
    }
}

/// All inclusion-minimal nontrivial normal subgroups, as inclusion-minimal
/// members of {normal closure of x : x ≠ e} — one closure per conjugacy
/// class, since the closure only depends on the class.
pub fn minimal_normal_subgroups(g: &GroupTable) -> Vec<Subgrp> {
    let mut candidates: Vec<Subgrp> = Vec::new();
    for class in &g.classes().classes {
        let rep = class[0];
        if rep == 0 {
            continue;
        }
        let n = normal_closure(g, &[rep]);
        if !candidates.iter().any(|c| c.elements == n.elements) {
            candidates.push(n);
        }
    }
    let minimal: Vec<Subgrp> = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|d| d.order() < c.order() && d.elements.is_subset_of(&c.elements))
        })
        .cloned()
        .collect();
    minimal
}

/// Chief series with the default choice (first minimal normal subgroup at
/// every step).
pub fn chief_series(g: &Arc<GroupTable>) -> Result<Vec<ChiefFactor>> {
    chief_series_with(g, |_, _| 0)
}

/// Chief series where `pick(level, n_choices)` selects which minimal normal
/// subgroup of the current quotient to ascend through. Different picks give
/// different series; centralizer-derived data must not depend on the choice.
pub fn chief_series_with(
    g: &Arc<GroupTable>,
    mut pick: impl FnMut(usize, usize) -> usize,
) -> Result<Vec<ChiefFactor>> {
    let n = g.order();
    let mut series: Vec<ChiefFactor> = Vec::new();
    let mut current = Subgrp::trivial(n);
    let mut level = 0;
    while current.order() < n {
        let (q, proj) = quotient_sharing(g, &current)?;
        let mins = minimal_normal_subgroups(&q);
        if mins.is_empty() {
            return Err(Error::Invalid("no minimal normal subgroup found".into()));
        }
        let m = &mins[pick(level, mins.len()) % mins.len()];
        let upper = pull_back(g.as_ref(), &current, &q, &proj, m);
        let kind = classify_factor(&q, &proj, m)?;
        let cz = centralizer_of_factor(g.as_ref(), &current, &upper);
        series.push(ChiefFactor {
            lower: current,
            upper: upper.clone(),
            kind,
            centralizer: cz,
        });
        current = upper;
        level += 1;
    }
    Ok(series)
}

/// Quotient G/A, sharing the ambient table when A = 1 instead of copying it.
fn quotient_sharing(g: &Arc<GroupTable>, a: &Subgrp) -> Result<(Arc<GroupTable>, Vec<u32>)> {
    if a.is_trivial() {
        return Ok((Arc::clone(g), (0..g.order() as u32).collect()));
    }
    let (q, proj) = quotient(g.as_ref(), a, g.order())?;
    Ok((Arc::new(q), proj))
}

/// Preimage of a subgroup of G/A, with generators = gens(A) plus one preimage
/// per quotient generator.
fn pull_back(g: &GroupTable, a: &Subgrp, _q: &GroupTable, proj: &[u32], m: &Subgrp) -> Subgrp {
    let n = g.order();
    let elements = ElementSet::from_iter(
        n,
        (0..n as u32).filter(|&x| m.contains(proj[x as usize])),
    );
    let mut gens = a.gens.clone();
    for &mg in &m.gens {
        let pre = (0..n as u32)
            .find(|&x| proj[x as usize] == mg)
            .expect("projection is onto");
        gens.push(pre);
    }
    Subgrp { elements, gens }
}

/// C_G(B/A) = {x : [b,x] ∈ A for b ∈ gens(B)}. Generator checks suffice since
/// [b1·b2, x] = [b1,x]^{b2}·[b2,x] and A is normal.
fn centralizer_of_factor(g: &GroupTable, a: &Subgrp, b: &Subgrp) -> Subgrp {
    let n = g.order();
    let elements = ElementSet::from_iter(
        n,
        (0..n as u32).filter(|&x| b.gens.iter().all(|&bg| a.contains(g.comm(bg, x)))),
    );
    subgroup::from_elements(g, elements)
}

fn classify_factor(q: &Arc<GroupTable>, proj: &[u32], m: &Subgrp) -> Result<FactorKind> {
    let abelian = m
        .gens
        .iter()
        .all(|&x| m.gens.iter().all(|&y| q.mul(x, y) == q.mul(y, x)));
    if abelian {
        let (p, dim) = prime_power(m.order() as u64)
            .ok_or_else(|| Error::Invalid("abelian minimal normal subgroup not a p-group".into()))?;
        let (basis, coords) = abelian_basis(q.as_ref(), m, p, dim)?;
        let mut data = AbelianData {
            p,
            dim,
            central: false,
            quotient: Arc::clone(q),
            proj: proj.to_vec(),
            basis,
            coords,
        };
        data.central = q
            .gen_indices()
            .iter()
            .all(|&y| data.basis.iter().all(|&b| q.conj(b, y) == b));
        // `central` above is computed w.r.t. quotient generators; ambient
        // generators project onto them, so the two notions agree.
        Ok(FactorKind::Abelian(data))
    } else {
        let factors = simple_factors(q.as_ref(), m)?;
        let mut data = SemisimpleData {
            quotient: Arc::clone(q),
            proj: proj.to_vec(),
            m_elements: m.elements.clone(),
            factors,
            transitive: false,
        };
        data.transitive = factor_action_transitive(&data, q.as_ref());
        Ok(FactorKind::Semisimple(data))
    }
}

/// Conjugation action of the whole group on an elementary abelian normal
/// subgroup, packaged the same way as a bottom chief factor N/1.
pub fn abelian_action(g: &Arc<GroupTable>, m: &Subgrp) -> Result<AbelianData> {
    if !is_normal(g.as_ref(), m) {
        return Err(Error::NotNormal);
    }
    let abelian = m
        .gens
        .iter()
        .all(|&x| m.gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
    if !abelian {
        return Err(Error::Hypothesis("subgroup is not abelian".into()));
    }
    let (p, dim) = prime_power(m.order() as u64)
        .ok_or_else(|| Error::Hypothesis("subgroup is not a p-group".into()))?;
    let (basis, coords) = abelian_basis(g.as_ref(), m, p, dim)?;
    let mut data = AbelianData {
        p,
        dim,
        central: false,
        quotient: Arc::clone(g),
        proj: (0..g.order() as u32).collect(),
        basis,
        coords,
    };
    data.central = g
        .gen_indices()
        .iter()
        .all(|&y| data.basis.iter().all(|&b| g.conj(b, y) == b));
    Ok(data)
}

fn prime_power(n: u64) -> Option<(u64, usize)> {
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut dim = 0;
    while m % p == 0 {
        m /= p;
        dim += 1;
    }
    (m == 1).then_some((p, dim))
}

/// Greedy basis of an elementary abelian subgroup plus coordinates of every
/// member in that basis.
fn abelian_basis(
    q: &GroupTable,
    m: &Subgrp,
    p: u64,
    dim: usize,
) -> Result<(Vec<u32>, HashMap<u32, Vec<u64>>)> {
    let mut basis: Vec<u32> = Vec::new();
    let mut span = Subgrp::trivial(q.order());
    for x in m.elements.iter() {
        if basis.len() == dim {
            break;
        }
        if !span.contains(x) {
            basis.push(x);
            span = closure(q, &basis);
        }
    }
    if basis.len() != dim || span.order() != m.order() {
        return Err(Error::Invalid("abelian factor basis extraction failed".into()));
    }
    let mut coords: HashMap<u32, Vec<u64>> = HashMap::with_capacity(m.order());
    let mut stack: Vec<(u32, Vec<u64>)> = vec![(0, vec![0; dim])];
    coords.insert(0, vec![0; dim]);
    while let Some((e, c)) = stack.pop() {
        for (i, &b) in basis.iter().enumerate() {
            if c[i] + 1 < p {
                let ne = q.mul(e, b);
                if !coords.contains_key(&ne) {
                    let mut nc = c.clone();
                    nc[i] += 1;
                    coords.insert(ne, nc.clone());
                    stack.push((ne, nc));
                }
            }
        }
    }
    if coords.len() != m.order() {
        return Err(Error::Invalid("abelian factor coordinates incomplete".into()));
    }
    Ok((basis, coords))
}

/// Simple factors of a non-abelian minimal normal subgroup M ≤ Q: the minimal
/// normal subgroups of M itself. Verified to be simple, non-abelian, and to
/// multiply up to M.
fn simple_factors(q: &GroupTable, m: &Subgrp) -> Result<Vec<Subgrp>> {
    let (mt, to_parent) = subgroup_table(q, m);
    let mt = Arc::new(mt);
    let mins = minimal_normal_subgroups(&mt);
    let mut product_order: u128 = 1;
    let mut factors = Vec::with_capacity(mins.len());
    for f in &mins {
        if !is_simple_nonabelian(&mt, f) {
            return Err(Error::Invalid(
                "semisimple factor decomposition produced a non-simple piece".into(),
            ));
        }
        product_order *= f.order() as u128;
        factors.push(Subgrp {
            elements: ElementSet::from_iter(
                q.order(),
                f.elements.iter().map(|x| to_parent[x as usize]),
            ),
            gens: f.gens.iter().map(|&x| to_parent[x as usize]).collect(),
        });
    }
    if product_order != m.order() as u128 {
        return Err(Error::Invalid(
            "simple factors do not multiply up to the whole factor".into(),
        ));
    }
    Ok(factors)
}

fn is_simple_nonabelian(t: &Arc<GroupTable>, h: &Subgrp) -> bool {
    if h.order() == 1 {
        return false;
    }
    let (ht, _) = subgroup_table(t.as_ref(), h);
    if ht.is_abelian() {
        return false;
    }
    let ht = Arc::new(ht);
    let mins = minimal_normal_subgroups(&ht);
    mins.len() == 1 && mins[0].order() == ht.order()
}

fn factor_action_transitive(data: &SemisimpleData, q: &GroupTable) -> bool {
    if data.factors.len() == 1 {
        return true;
    }
    // orbit of factor 0 under the generator-induced permutations
    let perms: Vec<Vec<usize>> = q
        .gen_indices()
        .iter()
        .map(|&y| {
            data.factors
                .iter()
                .map(|f| {
                    let probe = q.conj(f.gens[0], y);
                    data.factors
                        .iter()
                        .position(|h| h.contains(probe))
                        .expect("factors are permuted")
                })
                .collect()
        })
        .collect();
    let mut seen = vec![false; data.factors.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for p in &perms {
            if !seen[p[i]] {
                seen[p[i]] = true;
                stack.push(p[i]);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Intersection of the centralizers of all non-abelian *simple* chief factors
/// (the whole group when there are none).
pub fn compute_g0(g: &GroupTable, series: &[ChiefFactor]) -> Subgrp {
    intersect_centralizers(g, series, |f| !f.is_abelian() && f.composition_length() == 1)
}

/// Intersection of the centralizers of all bad chief factors (non-abelian of
/// composition length ≤ 2).
pub fn compute_g1(g: &GroupTable, series: &[ChiefFactor]) -> Subgrp {
    intersect_centralizers(g, series, |f| f.is_bad())
}

fn intersect_centralizers(
    g: &GroupTable,
    series: &[ChiefFactor],
    sel: impl Fn(&ChiefFactor) -> bool,
) -> Subgrp {
    let mut acc = ElementSet::full(g.order());
    for f in series.iter().filter(|f| sel(f)) {
        acc.intersect_with(&f.centralizer.elements);
    }
    subgroup::from_elements(g, acc)
}

pub enum AcceptFailure {
    /// H ≠ [H,G]
    NotCommutatorClosed,
    /// H ≰ G′
    NotInDerived,
    /// H ≰ G₁
    NotInG1,
}

impl AcceptFailure {
    pub fn describe(&self) -> &'static str {
        match self {
            AcceptFailure::NotCommutatorClosed => "H != [H,G]",
            AcceptFailure::NotInDerived => "H not inside the derived subgroup",
            AcceptFailure::NotInG1 => "H not inside G1",
        }
    }
}

pub struct Acceptability {
    pub acceptable: bool,
    pub failures: Vec<AcceptFailure>,
}

/// H is acceptable iff H = [H,G] and H ≤ G′ ∩ G₁.
pub fn is_acceptable(g: &Arc<GroupTable>, h: &Subgrp) -> Result<Acceptability> {
    if !is_normal(g.as_ref(), h) {
        return Err(Error::NotNormal);
    }
    let series = chief_series(g)?;
    let g1 = compute_g1(g.as_ref(), &series);
    let whole = Subgrp::whole(g.as_ref());
    let hg = comm_subgroup(g.as_ref(), h, &whole);
    let gd = derived(g.as_ref(), &whole);
    let mut failures = Vec::new();
    if hg.elements != h.elements {
        failures.push(AcceptFailure::NotCommutatorClosed);
    }
    if !h.elements.is_subset_of(&gd.elements) {
        failures.push(AcceptFailure::NotInDerived);
    }
    if !h.elements.is_subset_of(&g1.elements) {
        failures.push(AcceptFailure::NotInG1);
    }
    Ok(Acceptability {
        acceptable: failures.is_empty(),
        failures,
    })
}

// ---------------------------------------------------------------------------
// whole-group structure data and report
// ---------------------------------------------------------------------------

#[derive(Clone, Serialize)]
pub struct FactorSummary {
    pub order: u128,
    pub kind: &'static str,
    pub prime: Option<u64>,
    pub dimension: Option<usize>,
    pub n_simple_factors: Option<usize>,
    pub central: bool,
    pub transitive: Option<bool>,
    pub centralizer_order: u128,
    pub inside_g0: bool,
}

#[derive(Clone, Serialize)]
pub struct StructureReport {
    pub order: u128,
    pub factors: Vec<FactorSummary>,
    pub g0_order: u128,
    pub g1_order: u128,
    pub derived_orders: Vec<u128>,
    pub lower_central_orders: Vec<u128>,
}

pub struct StructureData {
    pub series: Vec<ChiefFactor>,
    pub g0: Subgrp,
    pub g1: Subgrp,
    pub derived_series: Vec<Subgrp>,
    pub lower_central: Vec<Subgrp>,
}

/// Derived series G ≥ G′ ≥ G″ ≥ …, ending when it stabilizes.
pub fn derived_series(g: &GroupTable) -> Vec<Subgrp> {
    let mut out = vec![Subgrp::whole(g)];
    loop {
        let next = derived(g, out.last().unwrap());
        if next.order() == out.last().unwrap().order() {
            return out;
        }
        out.push(next);
    }
}

/// Lower central series G = γ₁ ≥ γ₂ = [G,G] ≥ γ₃ = [γ₂,G] ≥ …
pub fn lower_central_series(g: &GroupTable) -> Vec<Subgrp> {
    let whole = Subgrp::whole(g);
    let mut out = vec![whole.clone()];
    loop {
        let next = comm_subgroup(g, out.last().unwrap(), &whole);
        if next.order() == out.last().unwrap().order() {
            return out;
        }
        out.push(next);
    }
}

pub fn structure_data(g: &Arc<GroupTable>) -> Result<StructureData> {
    let series = chief_series(g)?;
    let g0 = compute_g0(g.as_ref(), &series);
    let g1 = compute_g1(g.as_ref(), &series);
    Ok(StructureData {
        series,
        g0,
        g1,
        derived_series: derived_series(g.as_ref()),
        lower_central: lower_central_series(g.as_ref()),
    })
}

pub fn structure_report(g: &Arc<GroupTable>, data: &StructureData) -> StructureReport {
    let factors = data
        .series
        .iter()
        .map(|f| {
            let (kind, prime, dimension, n_simple, transitive) = match &f.kind {
                FactorKind::Abelian(a) => ("abelian", Some(a.p), Some(a.dim), None, None),
                FactorKind::Semisimple(s) => {
                    ("semisimple", None, None, Some(s.n_factors()), Some(s.transitive))
                }
            };
            FactorSummary {
                order: f.order(),
                kind,
                prime,
                dimension,
                n_simple_factors: n_simple,
                central: f.is_central(),
                transitive,
                centralizer_order: f.centralizer.order() as u128,
                inside_g0: f.upper.elements.is_subset_of(&data.g0.elements),
            }
        })
        .collect();
    StructureReport {
        order: g.order() as u128,
        factors,
        g0_order: data.g0.order() as u128,
        g1_order: data.g1.order() as u128,
        derived_orders: data.derived_series.iter().map(|s| s.order() as u128).collect(),
        lower_central_orders: data.lower_central.iter().map(|s| s.order() as u128).collect(),
    }
}

// ---------------------------------------------------------------------------
// cross-checks derived from the definitions
// ---------------------------------------------------------------------------

/// All normal subgroups of order ≤ bound: join-closure of the per-class
/// cyclic normal closures that fit under the bound. Any normal subgroup of
/// order ≤ bound is a join of such closures, each of which also fits.
pub fn normal_subgroups_up_to(g: &GroupTable, bound: usize) -> Vec<Subgrp> {
    let mut atoms: Vec<Subgrp> = vec![Subgrp::trivial(g.order())];
    for class in &g.classes().classes {
        if class[0] == 0 {
            continue;
        }
        let n = normal_closure(g, &[class[0]]);
        if n.order() <= bound && !atoms.iter().any(|a| a.elements == n.elements) {
            atoms.push(n);
        }
    }
    let mut all = atoms.clone();
    let mut frontier = atoms.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for a in &atoms {
                let j = join(g, f, a);
                if j.order() <= bound && !all.iter().any(|s| s.elements == j.elements) {
                    all.push(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    all
}

/// True when Q has a unique minimal normal subgroup which is non-abelian
/// simple with trivial centralizer — i.e. S ⊴ Q ≤ Aut(S).
pub fn is_almost_simple(q: &Arc<GroupTable>) -> bool {
    let mins = minimal_normal_subgroups(q);
    if mins.len() != 1 {
        return false;
    }
    let m = &mins[0];
    is_simple_nonabelian(q, m) && centralizer(q.as_ref(), &m.gens).is_trivial()
}

/// The other face of the definition: intersection of all normal T with G/T
/// almost-simple. Only normal subgroups of order ≤ |G|/60 can have an
/// almost-simple quotient (the socle alone has order ≥ 60).
pub fn g0_via_almost_simple_quotients(g: &Arc<GroupTable>) -> Result<Subgrp> {
    let bound = g.order() / 60;
    let mut acc = ElementSet::full(g.order());
    for t in normal_subgroups_up_to(g.as_ref(), bound) {
        let (q, _) = quotient(g.as_ref(), &t, g.order())?;
        if is_almost_simple(&Arc::new(q)) {
            acc.intersect_with(&t.elements);
        }
    }
    Ok(subgroup::from_elements(g.as_ref(), acc))
}

/// Whether H ≤ Q is a direct product of non-abelian simple groups (trivial
/// counts as the empty product).
pub fn is_semisimple_subgroup(q: &GroupTable, h: &Subgrp) -> bool {
    if h.is_trivial() {
        return true;
    }
    let (ht, _) = subgroup_table(q, h);
    let ht = Arc::new(ht);
    let mins = minimal_normal_subgroups(&ht);
    let mut prod: u128 = 1;
    for f in &mins {
        if !is_simple_nonabelian(&ht, f) {
            return false;
        }
        prod *= f.order() as u128;
    }
    prod == ht.order() as u128
}

/// Check that the image of (G²)⁽³⁾ in G/G₁ is semisimple, where G² is the
/// subgroup generated by all squares and ⁽³⁾ the third derived term.
pub fn squares_third_derived_semisimple(g: &Arc<GroupTable>, g1: &Subgrp) -> Result<bool> {
    let mut h = squares_subgroup(g.as_ref());
    for _ in 0..3 {
        h = derived(g.as_ref(), &h);
    }
    if g1.is_whole() {
        return Ok(true);
    }
    let (q, proj) = quotient(g.as_ref(), g1, g.order())?;
    let img_elems = ElementSet::from_iter(
        q.order(),
        h.elements.iter().map(|x| proj[x as usize]),
    );
    let img = subgroup::from_elements(&q, img_elems);
    Ok(is_semisimple_subgroup(&q, &img))
}

// ---------------------------------------------------------------------------
// chain path: permutation groups past the enumeration cap
// ---------------------------------------------------------------------------

/// Subgroup of a permutation group held as generators plus a stabilizer
/// chain; no element enumeration anywhere.
pub struct PermSub {
    pub gens: Vec<Perm>,
    pub chain: StabChain,
}

impl PermSub {
    pub fn from_gens(degree: usize, gens: Vec<Perm>) -> PermSub {
        let gens = reduce_gens(degree, &gens);
        let chain = StabChain::new(degree, &gens);
        PermSub { gens, chain }
    }

    pub fn trivial(degree: usize) -> PermSub {
        PermSub::from_gens(degree, Vec::new())
    }

    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.chain.contains(p)
    }

    pub fn contains_all(&self, other: &PermSub) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }
}

/// Normal closure of `seed` in the group generated by `ambient`.
pub fn perm_normal_closure(degree: usize, ambient: &[Perm], seed: &[Perm]) -> PermSub {
    let gens = normal_closure_gens(degree, ambient, seed);
    PermSub::from_gens(degree, gens)
}

/// [A, B] for A normal: normal closure of the generator commutators.
pub fn perm_comm_subgroup(degree: usize, ambient: &[Perm], a: &[Perm], b: &[Perm]) -> PermSub {
    let mut seed = Vec::new();
    for x in a {
        for y in b {
            let c = x.inverse().mul(&y.inverse()).mul(x).mul(y);
            if !c.is_identity() {
                seed.push(c);
            }
        }
    }
    perm_normal_closure(degree, ambient, &seed)
}

pub struct PermChiefFactor {
    pub lower_order: u128,
    pub upper_order: u128,
    pub upper: PermSub,
    pub kind: PermFactorKind,
}

pub enum PermFactorKind {
    Abelian {
        p: u64,
        dim: usize,
        central: bool,
    },
    Semisimple {
        factors: Vec<PermSub>,
        transitive: bool,
    },
}

pub struct PermStructureData {
    pub degree: usize,
    pub order: u128,
    pub series: Vec<PermChiefFactor>,
    /// G₀ and G₁ equal the whole group whenever no simple/bad factors occur;
    /// the chain path only supports that situation and errors otherwise.
    pub g0_is_whole: bool,
    pub g1_is_whole: bool,
    pub derived_orders: Vec<u128>,
    pub lower_central_orders: Vec<u128>,
    pub derived: Vec<PermSub>,
}

/// Chief-structure analysis driven purely by stabilizer chains. Supports the
/// shapes that occur past the enumeration cap in practice: a semisimple
/// bottom whose simple factors live on disjoint orbits, with soluble layers
/// above. Anything else is refused with an explicit error.
pub fn perm_structure(degree: usize, gens: &[Perm], seed: u64) -> Result<PermStructureData> {
    let whole = PermSub::from_gens(degree, gens.to_vec());
    let order = whole.order();
    let mut series: Vec<PermChiefFactor> = Vec::new();
    let mut current = PermSub::trivial(degree);
    let mut step = 0;
    while current.order() < order {
        step += 1;
        if step > 64 {
            return Err(Error::NoConvergence("chief series did not terminate".into()));
        }
        let upper = minimal_normal_over(degree, &whole, &current, seed)?;
        let kind = classify_perm_factor(degree, &whole, &current, &upper)?;
        series.push(PermChiefFactor {
            lower_order: current.order(),
            upper_order: upper.order(),
            upper: PermSub::from_gens(degree, upper.gens.clone()),
            kind,
        });
        current = upper;
    }
    let has_bad = series.iter().any(|f| match &f.kind {
        PermFactorKind::Abelian { .. } => false,
        PermFactorKind::Semisimple { factors, .. } => factors.len() <= 2,
    });
    if has_bad {
        return Err(Error::Invalid(
            "chain path cannot compute centralizers of bad factors; enumerate the group instead"
                .into(),
        ));
    }
    // derived and lower central series through chains
    let mut derived_subs = vec![PermSub::from_gens(degree, whole.gens.clone())];
    loop {
        let last = derived_subs.last().unwrap();
        let next = perm_comm_subgroup(degree, &whole.gens, &last.gens, &last.gens);
        if next.order() == last.order() {
            break;
        }
        derived_subs.push(next);
    }
    let mut lcs_orders = vec![order];
    let mut gamma = PermSub::from_gens(degree, whole.gens.clone());
    loop {
        let next = perm_comm_subgroup(degree, &whole.gens, &gamma.gens, &whole.gens);
        if next.order() == gamma.order() {
            break;
        }
        lcs_orders.push(next.order());
        gamma = next;
    }
    Ok(PermStructureData {
        degree,
        order,
        derived_orders: derived_subs.iter().map(|s| s.order()).collect(),
        lower_central_orders: lcs_orders,
        series,
        g0_is_whole: true,
        g1_is_whole: true,
        derived: derived_subs,
    })
}

/// Smallest normal subgroup strictly above `current`, searched over a pool of
/// candidate elements: orbit-kernel generators, the group generators, and
/// seeded random elements. The pool is a heuristic; the minimality of the
/// result among the candidates is exact, and every closure is verified to
/// contain `current`.
fn minimal_normal_over(
    degree: usize,
    whole: &PermSub,
    current: &PermSub,
    seed: u64,
) -> Result<PermSub> {
    let mut pool: Vec<Perm> = Vec::new();
    // orbit kernels: elements supported on a single orbit
    let orbits = orbit_partition(degree, &whole.gens);
    for orbit in &orbits {
        let complement: Vec<u32> = (0..degree as u32).filter(|p| !orbit.contains(p)).collect();
        for g in pointwise_stabilizer(degree, &whole.gens, &complement) {
            pool.push(g);
        }
    }
    pool.extend(whole.gens.iter().cloned());
    let mut rng = crate::rng::substream(seed, "chief-perm-pool", 0);
    for _ in 0..24 {
        pool.push(whole.chain.uniform_element(&mut rng));
    }
    let mut best: Option<PermSub> = None;
    for cand in &pool {
        if cand.is_identity() || current.contains(cand) {
            continue;
        }
        let mut seedv = current.gens.clone();
        seedv.push(cand.clone());
        let n = perm_normal_closure(degree, &whole.gens, &seedv);
        match &best {
            None => best = Some(n),
            Some(b) => {
                if n.order() < b.order() {
                    best = Some(n);
                }
            }
        }
    }
    best.ok_or_else(|| Error::Invalid("no candidate found above the current term".into()))
}

fn orbit_partition(degree: usize, gens: &[Perm]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut orbits = Vec::new();
    for start in 0..degree as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start as usize] = true;
        let mut head = 0;
        while head < orbit.len() {
            let w = orbit[head];
            head += 1;
            for g in gens {
                let d = g.image(w);
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    orbit.push(d);
                }
            }
        }
        orbits.push(orbit);
    }
    orbits
}

fn classify_perm_factor(
    degree: usize,
    whole: &PermSub,
    lower: &PermSub,
    upper: &PermSub,
) -> Result<PermFactorKind> {
    let index = (upper.order() / lower.order()) as u64;
    // abelian ⟺ all generator commutators land in the lower term
    let abelian = upper.gens.iter().all(|x| {
        upper.gens.iter().all(|y| {
            let c = x.inverse().mul(&y.inverse()).mul(x).mul(y);
            lower.contains(&c)
        })
    });
    if abelian {
        let (p, dim) = prime_power(index)
            .ok_or_else(|| Error::Invalid("abelian chief factor is not a p-group".into()))?;
        let central = upper.gens.iter().all(|x| {
            whole.gens.iter().all(|y| {
                let c = x.inverse().mul(&y.inverse()).mul(x).mul(y);
                lower.contains(&c)
            })
        });
        return Ok(PermFactorKind::Abelian { p, dim, central });
    }
    if lower.order() != 1 {
        return Err(Error::Invalid(
            "chain path only decomposes a semisimple factor at the bottom of the series".into(),
        ));
    }
    // simple factors as single-orbit kernels of the factor group
    let orbits = orbit_partition(degree, &upper.gens);
    let mut factors: Vec<PermSub> = Vec::new();
    let mut prod: u128 = 1;
    for orbit in &orbits {
        if orbit.len() == 1 {
            continue;
        }
        let complement: Vec<u32> = (0..degree as u32).filter(|p| !orbit.contains(p)).collect();
        let k = pointwise_stabilizer(degree, &upper.gens, &complement);
        if k.is_empty() {
            continue;
        }
        let f = PermSub::from_gens(degree, k);
        prod = prod.saturating_mul(f.order());
        factors.push(f);
    }
    if prod != upper.order() || factors.is_empty() {
        return Err(Error::Invalid(
            "semisimple factor does not split along orbits; enumerate the group instead".into(),
        ));
    }
    // each factor must be simple: verify on its own (small) table
    for f in &factors {
        let t = GroupTable::from_perm_gens(degree, &f.gens, 20_000)?;
        let t = Arc::new(t);
        if t.is_abelian() {
            return Err(Error::Invalid("orbit factor is abelian".into()));
        }
        let mins = minimal_normal_subgroups(&t);
        if mins.len() != 1 || mins[0].order() != t.order() {
            return Err(Error::Invalid("orbit factor is not simple".into()));
        }
    }
    let transitive = perm_factors_transitive(&factors, &whole.gens);
    Ok(PermFactorKind::Semisimple { factors, transitive })
}

/// How an ambient element permutes chain-held simple factors.
pub fn perm_factor_perm(factors: &[PermSub], y: &Perm) -> Vec<usize> {
    factors
        .iter()
        .map(|f| {
            let probe = f.gens[0].conj(y);
            factors
                .iter()
                .position(|h| h.contains(&probe))
                .expect("conjugation permutes the factors")
        })
        .collect()
}

/// |C_M(y)| where M is the product of the chain-held simple factors and y
/// permutes them. A centralizing element is determined by one component per
/// y-cycle of factors, and that component must be fixed by conjugation by
/// y^len; each factor is small enough to enumerate on its own.
pub fn perm_factor_centralizer_order(factors: &[PermSub], y: &Perm) -> Result<u128> {
    let fperm = perm_factor_perm(factors, y);
    let mut seen = vec![false; factors.len()];
    let mut total: u128 = 1;
    for start in 0..factors.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        loop {
            seen[i] = true;
            len += 1;
            i = fperm[i];
            if i == start {
                break;
            }
        }
        let mut y_pow = Perm::identity(y.images().len());
        for _ in 0..len {
            y_pow = y_pow.mul(y);
        }
        let f = &factors[start];
        let enumeration =
            crate::group::EnumGroup::from_perm_gens(y.images().len(), &f.gens, 200_000)?;
        let fixed = (0..enumeration.order())
            .filter(|&i| {
                let e = enumeration.perm(i as u32);
                e.conj(&y_pow) == *e
            })
            .count();
        total *= fixed as u128;
    }
    Ok(total)
}

fn perm_factors_transitive(factors: &[PermSub], gens: &[Perm]) -> bool {
    let perms: Vec<Vec<usize>> = gens.iter().map(|g| perm_factor_perm(factors, g)).collect();
    let mut seen = vec![false; factors.len()];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for p in &perms {
            if !seen[p[i]] {
                seen[p[i]] = true;
                stack.push(p[i]);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Acceptability through chains: H = [H,G] and H ≤ G′, with H ≤ G₁ already
/// implied because the chain path only succeeds when G₁ = G.
pub fn perm_is_acceptable(
    degree: usize,
    ambient: &[Perm],
    h: &PermSub,
    data: &PermStructureData,
) -> Result<(bool, Vec<&'static str>)> {
    // normality of H
    for hg in &h.gens {
        for g in ambient {
            if !h.contains(&hg.conj(g)) {
                return Err(Error::NotNormal);
            }
        }
    }
    let mut failures = Vec::new();
    let hg = perm_comm_subgroup(degree, ambient, &h.gens, ambient);
    if !(hg.order() == h.order() && h.contains_all(&hg)) {
        failures.push("H != [H,G]");
    }
    let gd = &data.derived[1.min(data.derived.len() - 1)];
    if !gd.contains_all(h) {
        failures.push("H not inside the derived subgroup");
    }
    if !data.g1_is_whole {
        failures.push("H not inside G1");
    }
    Ok((failures.is_empty(), failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions as cons;

    fn arc(g: crate::group::Group) -> Arc<GroupTable> {
        g.table().unwrap()
    }

    #[test]
    fn minimal_normals_of_sym5_is_alt5() {
        let t = arc(cons::sym(5));
        let mins = minimal_normal_subgroups(&t);
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 60);
    }

    #[test]
    fn minimal_normals_of_simple_group_is_itself() {
        let t = arc(cons::alt(5));
        let mins = minimal_normal_subgroups(&t);
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 60);
    }

    #[test]
    fn minimal_normals_of_alt5_squared_are_the_two_factors() {
        let t = arc(cons::alt5_sq());
        let mins = minimal_normal_subgroups(&t);
        assert_eq!(mins.len(), 2);
        assert!(mins.iter().all(|m| m.order() == 60));
    }

    #[test]
    fn chief_series_of_sym5() {
        let t = arc(cons::sym(5));
        let series = chief_series(&t).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].order(), 60);
        assert!(!series[0].is_abelian());
        assert_eq!(series[0].composition_length(), 1);
        assert_eq!(series[1].order(), 2);
        assert!(series[1].is_abelian());
    }

    #[test]
    fn chief_series_of_cyclic_prime() {
        let t = arc(cons::cyclic(5));
        let series = chief_series(&t).unwrap();
        assert_eq!(series.len(), 1);
        match &series[0].kind {
            FactorKind::Abelian(a) => {
                assert_eq!(a.p, 5);
                assert_eq!(a.dim, 1);
                assert!(a.central);
            }
            _ => panic!("expected abelian factor"),
        }
    }

    #[test]
    fn g0_of_sym5_is_trivial() {
        let t = arc(cons::sym(5));
        let series = chief_series(&t).unwrap();
        let g0 = compute_g0(&t, &series);
        assert_eq!(g0.order(), 1);
    }

    #[test]
    fn g0_of_alt5_times_c6() {
        let t = arc(cons::alt5_times_c6());
        let series = chief_series(&t).unwrap();
        let g0 = compute_g0(&t, &series);
        assert_eq!(g0.order(), 6);
    }

    #[test]
    fn g0_of_soluble_group_is_whole() {
        let t = arc(cons::dihedral(6));
        let series = chief_series(&t).unwrap();
        assert!(compute_g0(&t, &series).is_whole());
        assert!(compute_g1(&t, &series).is_whole());
    }

    #[test]
    fn g1_of_alt5_squared_is_trivial() {
        let t = arc(cons::alt5_sq());
        let series = chief_series(&t).unwrap();
        // both factors are bad (simple), their centralizers are the opposite
        // factors, intersection trivial
        let g1 = compute_g1(&t, &series);
        assert_eq!(g1.order(), 1);
    }

    #[test]
    fn acceptability_in_sym5() {
        let t = arc(cons::sym(5));
        let series = chief_series(&t).unwrap();
        let alt5 = &series[0].upper;
        let res = is_acceptable(&t, alt5).unwrap();
        assert!(!res.acceptable);
        assert!(res
            .failures
            .iter()
            .any(|f| matches!(f, AcceptFailure::NotInG1)));
        // trivial subgroup is acceptable
        let triv = Subgrp::trivial(t.order());
        assert!(is_acceptable(&t, &triv).unwrap().acceptable);
    }

    #[test]
    fn series_choice_does_not_change_g0_g1() {
        for g in [cons::alt5_sq(), cons::sym(4)] {
            let t = arc(g);
            let mut seen_g0 = Vec::new();
            let mut seen_g1 = Vec::new();
            for variant in 0..3usize {
                let series = chief_series_with(&t, |level, n| (variant + level) % n).unwrap();
                seen_g0.push(compute_g0(&t, &series).elements);
                seen_g1.push(compute_g1(&t, &series).elements);
            }
            assert!(seen_g0.windows(2).all(|w| w[0] == w[1]));
            assert!(seen_g1.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn g0_definitions_agree_on_small_groups() {
        for g in [
            cons::sym(5),
            cons::alt(5),
            cons::alt5_times_c6(),
            cons::dihedral(8),
            cons::sym(4),
        ] {
            let t = arc(g);
            let series = chief_series(&t).unwrap();
            let direct = compute_g0(&t, &series);
            let via_quotients = g0_via_almost_simple_quotients(&t).unwrap();
            assert_eq!(direct.elements, via_quotients.elements);
        }
    }

    #[test]
    fn centralizer_contains_upper_term_for_abelian_factors() {
        let t = arc(cons::sym(4));
        let series = chief_series(&t).unwrap();
        for f in &series {
            if f.is_abelian() {
                assert!(f.upper.elements.is_subset_of(&f.centralizer.elements));
            }
        }
    }

    #[test]
    fn squares_third_derived_check_runs() {
        for g in [cons::sym(5), cons::alt5_sq(), cons::q8()] {
            let t = arc(g);
            let series = chief_series(&t).unwrap();
            let g1 = compute_g1(&t, &series);
            assert!(squares_third_derived_semisimple(&t, &g1).unwrap());
        }
    }

    #[test]
    fn perm_structure_of_triple_alt5_with_rotation() {
        let g = cons::alt5_cubed_rot();
        let gens = g.generators().unwrap().to_vec();
        let data = perm_structure(15, &gens, 11).unwrap();
        assert_eq!(data.order, 648_000);
        assert_eq!(data.series.len(), 2);
        assert_eq!(data.series[0].upper_order, 216_000);
        match &data.series[0].kind {
            PermFactorKind::Semisimple { factors, transitive } => {
                assert_eq!(factors.len(), 3);
                assert!(factors.iter().all(|f| f.order() == 60));
                assert!(*transitive);
            }
            _ => panic!("expected semisimple bottom factor"),
        }
        match &data.series[1].kind {
            PermFactorKind::Abelian { p, dim, .. } => {
                assert_eq!((*p, *dim), (3, 1));
            }
            _ => panic!("expected abelian top factor"),
        }
        assert!(data.g0_is_whole && data.g1_is_whole);
        // derived series: G' = Alt(5)^3 and stays there
        assert_eq!(data.derived_orders[0], 648_000);
        assert_eq!(data.derived_orders[1], 216_000);
        // acceptability of H = Alt(5)^3
        let h = PermSub::from_gens(15, data.series[0].upper.gens.clone());
        let (ok, fails) = perm_is_acceptable(15, &gens, &h, &data).unwrap();
        assert!(ok, "failures: {:?}", fails);
    }

    #[test]
    fn perm_structure_matches_table_path_on_sym5() {
        let g = cons::sym(5);
        let gens = g.generators().unwrap().to_vec();
        // Sym(5) has a bad factor (Alt(5)); the chain path must refuse
        assert!(perm_structure(5, &gens, 3).is_err());
    }
}
