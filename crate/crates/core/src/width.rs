//! Set algebra and width measurements: exact layered product profiles,
//! commutator width, ordered commutator-product profiles of [H,G], witness
//! search for generation by conjugates, verbal width, and the
//! product-coverage criterion driven by the minimal real representation
//! dimension.

use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::autos::Automorphism;
use crate::chief;
use crate::elset::ElementSet;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::stabchain::StabChain;
use crate::subgroup::{
    closure, comm_subgroup, derived, is_normal, iterated_comm_with_group, join, Subgrp,
};
use crate::table::{GroupOps, GroupTable};
use crate::words::Word;

/// Largest |X|·|Y| handled sequentially with early exit; larger products go
/// through the parallel path.
const PAR_THRESHOLD: usize = 1 << 20;

/// Exact {xy : x ∈ X, y ∈ Y}.
pub fn set_product<G: GroupOps>(g: &G, x: &ElementSet, y: &ElementSet) -> Result<ElementSet> {
    let n = g.order();
    if x.universe() != n || y.universe() != n {
        return Err(Error::OwnerMismatch);
    }
    let ys = y.to_vec();
    if x.len().saturating_mul(ys.len()) <= PAR_THRESHOLD {
        let mut out = ElementSet::empty(n);
        for a in x.iter() {
            for &b in &ys {
                out.insert(g.mul(a, b));
            }
            if out.len() == n {
                return Ok(out);
            }
        }
        Ok(out)
    } else {
        let xs = x.to_vec();
        Ok(xs
            .par_iter()
            .fold(
                || ElementSet::empty(n),
                |mut acc, &a| {
                    for &b in &ys {
                        acc.insert(g.mul(a, b));
                    }
                    acc
                },
            )
            .reduce(
                || ElementSet::empty(n),
                |mut a, b| {
                    a.union_with(&b);
                    a
                },
            ))
    }
}

/// {[x,y] : x ∈ H} for a fixed y.
pub fn comm_set<G: GroupOps>(g: &G, h: &Subgrp, y: u32) -> ElementSet {
    ElementSet::from_iter(g.order(), h.elements.iter().map(|x| g.comm(x, y)))
}

/// All commutators [a,b] with a,b ∈ S.
pub fn commutator_set<G: GroupOps>(g: &G, s: &Subgrp) -> ElementSet {
    let n = g.order();
    let v = s.elements.to_vec();
    v.par_iter()
        .fold(
            || ElementSet::empty(n),
            |mut acc, &a| {
                for &b in &v {
                    acc.insert(g.comm(a, b));
                }
                acc
            },
        )
        .reduce(
            || ElementSet::empty(n),
            |mut a, b| {
                a.union_with(&b);
                a
            },
        )
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthProfile {
    pub base_size: usize,
    pub target_order: usize,
    /// |X^{*1}|, |X^{*2}|, … up to the stopping layer
    pub layer_sizes: Vec<usize>,
    /// minimal f with X^{*f} = target, when reached
    pub reached_at: Option<usize>,
    /// layer at which X^{*f} = X^{*f+1} without reaching the target
    pub stabilized_at: Option<usize>,
    pub exact: bool,
    /// (f, distinct hits, samples) rows for the randomized path
    pub sampled_coverage: Option<Vec<(usize, u64, u64)>>,
}

pub const DEFAULT_MAX_LAYERS: usize = 64;

/// Layer X, X^{*2}, X^{*3}, … until the target subgroup is filled or the
/// layers stop changing. The base must stay inside the target, so reaching it
/// is a size check.
pub fn layered_profile<G: GroupOps>(
    g: &G,
    base: &ElementSet,
    target: &Subgrp,
    max_f: usize,
) -> Result<WidthProfile> {
    if base.is_empty() {
        return Err(Error::Invalid("empty base set".into()));
    }
    if !base.is_subset_of(&target.elements) {
        return Err(Error::Invalid("base set leaves the target subgroup".into()));
    }
    let mut layer_sizes = Vec::new();
    let mut cur = base.clone();
    let mut reached_at = None;
    let mut stabilized_at = None;
    for f in 1..=max_f {
        layer_sizes.push(cur.len());
        if cur.len() == target.order() {
            reached_at = Some(f);
            break;
        }
        let next = set_product(g, &cur, base)?;
        if next == cur {
            stabilized_at = Some(f);
            break;
        }
        cur = next;
    }
    Ok(WidthProfile {
        base_size: base.len(),
        target_order: target.order(),
        layer_sizes,
        reached_at,
        stabilized_at,
        exact: true,
        sampled_coverage: None,
    })
}

/// Minimal f with S = C^{*f}, C the commutators of S. Not reached (and
/// reported so) when S is not perfect.
pub fn commutator_width<G: GroupOps>(g: &G, s: &Subgrp) -> Result<WidthProfile> {
    let c = commutator_set(g, s);
    layered_profile(g, &c, s, DEFAULT_MAX_LAYERS)
}

/// Ordered product ∏ᵢ [H, yᵢ] as a set, in the given order of Y.
pub fn ordered_comm_product<G: GroupOps>(g: &G, h: &Subgrp, ys: &[u32]) -> Result<ElementSet> {
    let mut acc = ElementSet::singleton(g.order(), 0);
    for &y in ys {
        let factor = comm_set(g, h, y);
        acc = set_product(g, &acc, &factor)?;
    }
    Ok(acc)
}

fn check_symmetric<G: GroupOps>(g: &G, ys: &[u32]) -> Result<()> {
    for &y in ys {
        let yi = g.inv(y);
        let c = ys.iter().filter(|&&z| z == y).count();
        let ci = ys.iter().filter(|&&z| z == yi).count();
        if c != ci {
            return Err(Error::Hypothesis("Y is not symmetric".into()));
        }
    }
    Ok(())
}

/// Profile of [H,G] as layered powers of the ordered product ∏ᵢ[H,yᵢ], for a
/// symmetric multiset Y generating G. The identity sits in every base
/// factor, so layers grow monotonically and the search always terminates.
pub fn comm_product_profile<G: GroupOps>(
    g: &G,
    ys: &[u32],
    h: &Subgrp,
) -> Result<WidthProfile> {
    if !is_normal(g, h) {
        return Err(Error::NotNormal);
    }
    check_symmetric(g, ys)?;
    if closure(g, ys).order() != g.order() {
        return Err(Error::Hypothesis("Y does not generate G".into()));
    }
    let whole = Subgrp::whole(g);
    let target = comm_subgroup(g, h, &whole);
    let base = ordered_comm_product(g, h, ys)?;
    layered_profile(g, &base, &target, DEFAULT_MAX_LAYERS)
}

/// Same profile under the weaker hypothesis H⟨Y⟩ = G′⟨Y⟩ = G with H inside
/// G₀; Y need not generate on its own.
pub fn comm_product_profile_partial(
    g: &Arc<GroupTable>,
    ys: &[u32],
    h: &Subgrp,
) -> Result<WidthProfile> {
    if !is_normal(g.as_ref(), h) {
        return Err(Error::NotNormal);
    }
    check_symmetric(g.as_ref(), ys)?;
    let y_sub = closure(g.as_ref(), ys);
    if join(g.as_ref(), h, &y_sub).order() != g.order() {
        return Err(Error::Hypothesis("G != H<Y>".into()));
    }
    let whole = Subgrp::whole(g.as_ref());
    let gd = derived(g.as_ref(), &whole);
    if join(g.as_ref(), &gd, &y_sub).order() != g.order() {
        return Err(Error::Hypothesis("G != G'<Y>".into()));
    }
    let series = chief::chief_series(g)?;
    let g0 = chief::compute_g0(g.as_ref(), &series);
    if !h.elements.is_subset_of(&g0.elements) {
        return Err(Error::Hypothesis("H not inside G0".into()));
    }
    let target = comm_subgroup(g.as_ref(), h, &whole);
    let base = ordered_comm_product(g.as_ref(), h, ys)?;
    layered_profile(g.as_ref(), &base, &target, DEFAULT_MAX_LAYERS)
}

/// Randomized coverage version for permutation groups past the enumeration
/// cap: sample layer-f products of the base ∏ᵢ[H,yᵢ] and count distinct
/// members of [H,G] through stabilizer-chain coordinates. Exact only in the
/// lucky case where sampling covers the whole target.
pub fn comm_product_coverage_perm(
    degree: usize,
    ambient: &[Perm],
    h: &chief::PermSub,
    ys: &[Perm],
    samples: u64,
    max_f: usize,
    seed: u64,
) -> Result<WidthProfile> {
    for hg in &h.gens {
        for a in ambient {
            if !h.contains(&hg.conj(a)) {
                return Err(Error::NotNormal);
            }
        }
    }
    let whole = StabChain::new(degree, ambient);
    let order = whole.order();
    let mut gens = h.gens.clone();
    gens.extend(ys.iter().cloned());
    if StabChain::new(degree, &gens).order() != order {
        return Err(Error::Hypothesis("G != H<Y>".into()));
    }
    let gd = chief::perm_comm_subgroup(degree, ambient, ambient, ambient);
    let mut gens = gd.gens.clone();
    gens.extend(ys.iter().cloned());
    if StabChain::new(degree, &gens).order() != order {
        return Err(Error::Hypothesis("G != G'<Y>".into()));
    }
    let target = chief::perm_comm_subgroup(degree, ambient, &h.gens, ambient);
    let t_ord = target.order();
    if t_ord > 100_000_000 {
        return Err(Error::Invalid("target too large for hit counting".into()));
    }
    let t_ord_usize = t_ord as usize;
    let mut rows: Vec<(usize, u64, u64)> = Vec::new();
    let mut reached_at = None;
    for f in 1..=max_f {
        let mut rng = crate::rng::substream(seed, "width-cover", f as u64);
        let mut bits = vec![0u64; t_ord_usize.div_ceil(64)];
        let mut distinct: u64 = 0;
        for _ in 0..samples {
            let mut prod = Perm::identity(degree);
            for _ in 0..f {
                for y in ys {
                    let x = h.chain.uniform_element(&mut rng);
                    let c = x.inverse().mul(&y.inverse()).mul(&x).mul(y);
                    prod = prod.mul(&c);
                }
            }
            let idx = target
                .chain
                .coords_index(&prod)
                .ok_or_else(|| Error::Invalid("sampled product left [H,G]".into()))?
                as usize;
            let (w, b) = (idx / 64, idx % 64);
            if bits[w] & (1 << b) == 0 {
                bits[w] |= 1 << b;
                distinct += 1;
            }
        }
        rows.push((f, distinct, samples));
        if u128::from(distinct) == t_ord {
            // every target element was exhibited as a layer-f product, which
            // proves coverage at this f
            reached_at = Some(f);
            break;
        }
    }
    Ok(WidthProfile {
        base_size: 0,
        target_order: t_ord as usize,
        layer_sizes: Vec::new(),
        reached_at,
        stabilized_at: None,
        exact: reached_at.is_some(),
        sampled_coverage: Some(rows),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    /// minimal number of conjugator columns found, when successful
    pub j_found: Option<usize>,
    /// witnesses[i][j] conjugates ys[i]; present when found
    pub witnesses: Vec<Vec<u32>>,
    /// false means the search budget ran out — an existence check, never a
    /// refutation
    pub conclusive: bool,
    pub restarts_used: u64,
}

/// Search for conjugators x_{ij} ∈ K making {yᵢ^{x_{ij}}} generate G, with
/// at most j_max conjugates per yᵢ. Greedy growth plus seeded restarts.
pub fn conjugate_generation_witness(
    g: &Arc<GroupTable>,
    k_sub: &Subgrp,
    ys: &[u32],
    j_max: usize,
    restarts: u64,
    seed: u64,
) -> Result<WitnessReport> {
    use rand::Rng;
    if !is_normal(g.as_ref(), k_sub) {
        return Err(Error::NotNormal);
    }
    let series = chief::chief_series(g)?;
    let g0 = chief::compute_g0(g.as_ref(), &series);
    if !k_sub.elements.is_subset_of(&g0.elements) {
        return Err(Error::Hypothesis("K not inside G0".into()));
    }
    let y_sub = closure(g.as_ref(), ys);
    if join(g.as_ref(), k_sub, &y_sub).order() != g.order() {
        return Err(Error::Hypothesis("G != K<Y>".into()));
    }
    let whole = Subgrp::whole(g.as_ref());
    let gd = derived(g.as_ref(), &whole);
    if join(g.as_ref(), &gd, &y_sub).order() != g.order() {
        return Err(Error::Hypothesis("G != G'<Y>".into()));
    }
    let m = ys.len();
    if y_sub.order() == g.order() {
        return Ok(WitnessReport {
            j_found: Some(1),
            witnesses: vec![vec![0]; m],
            conclusive: true,
            restarts_used: 0,
        });
    }
    let k_elems = k_sub.elements.to_vec();
    let mut best: Option<(usize, Vec<Vec<u32>>)> = None;
    for r in 0..restarts {
        let mut rng = crate::rng::substream(seed, "width-witness", r);
        // column 1 is always the identity column
        let mut cols: Vec<Vec<u32>> = vec![vec![0; m]];
        let mut gens: Vec<u32> = ys.to_vec();
        let mut cur = closure(g.as_ref(), &gens);
        'grow: for j in 2..=j_max {
            if let Some((bj, _)) = &best {
                if j >= *bj {
                    break 'grow;
                }
            }
            // several attempts to find a column that strictly grows the span
            let mut grown = false;
            for _ in 0..24 {
                let col: Vec<u32> = (0..m)
                    .map(|_| k_elems[rng.gen_range(0..k_elems.len())])
                    .collect();
                let mut cand_gens = gens.clone();
                for (i, &x) in col.iter().enumerate() {
                    cand_gens.push(g.conj(ys[i], x));
                }
                let cand = closure(g.as_ref(), &cand_gens);
                if cand.order() > cur.order() {
                    cols.push(col);
                    gens = cand_gens;
                    cur = cand;
                    grown = true;
                    break;
                }
            }
            if !grown {
                break 'grow;
            }
            if cur.order() == g.order() {
                let witnesses: Vec<Vec<u32>> =
                    (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
                if best.as_ref().map_or(true, |(bj, _)| j < *bj) {
                    best = Some((j, witnesses));
                }
                break 'grow;
            }
        }
        if matches!(&best, Some((j, _)) if *j == 2) {
            // cannot do better than one extra column
            return Ok(WitnessReport {
                j_found: Some(2),
                witnesses: best.unwrap().1,
                conclusive: true,
                restarts_used: r + 1,
            });
        }
    }
    match best {
        Some((j, witnesses)) => Ok(WitnessReport {
            j_found: Some(j),
            witnesses,
            conclusive: true,
            restarts_used: restarts,
        }),
        None => Ok(WitnessReport {
            j_found: None,
            witnesses: Vec::new(),
            conclusive: false,
            restarts_used: restarts,
        }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WordWidthReport {
    pub arity: usize,
    /// symmetrized value set size
    pub values: usize,
    pub verbal_order: usize,
    /// minimal m with (value set)^{*m} = verbal subgroup
    pub width: Option<usize>,
    /// index of the verbal subgroup
    pub beta: usize,
    pub exact: bool,
}

const WORD_EXACT_RANGE: u128 = 100_000_000;

/// Verbal width: value set of w (symmetrized), the subgroup it generates,
/// the minimal covering power, and the index of the verbal subgroup.
/// Exhaustive when |G|^arity is within range, sampled otherwise.
pub fn word_width(
    g: &GroupTable,
    w: &Word,
    samples: u64,
    seed: u64,
) -> Result<WordWidthReport> {
    use rand::Rng;
    let n = g.order();
    let k = w.arity();
    let exact = (n as u128).pow(k as u32) <= WORD_EXACT_RANGE;
    let mut values = ElementSet::empty(n);
    values.insert(0);
    if exact {
        let mut args = vec![0u32; k];
        'outer: loop {
            values.insert(w.evaluate(g, &args));
            for pos in 0..k {
                args[pos] += 1;
                if (args[pos] as usize) < n {
                    continue 'outer;
                }
                args[pos] = 0;
            }
            break;
        }
    } else {
        let mut rng = crate::rng::substream(seed, "word-width", 0);
        let mut args = vec![0u32; k];
        for _ in 0..samples {
            for a in args.iter_mut() {
                *a = rng.gen_range(0..n as u32);
            }
            values.insert(w.evaluate(g, &args));
        }
    }
    // symmetrize
    let mut sym = values.clone();
    for v in values.iter() {
        sym.insert(g.inv(v));
    }
    let verbal = closure(g, &sym.to_vec());
    let profile = layered_profile(g, &sym, &verbal, DEFAULT_MAX_LAYERS)?;
    Ok(WordWidthReport {
        arity: k,
        values: sym.len(),
        verbal_order: verbal.order(),
        width: profile.reached_at,
        beta: n / verbal.order(),
        exact,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GowersReport {
    pub t: usize,
    pub sizes: Vec<usize>,
    pub hypothesis_holds: bool,
    pub covered: bool,
    pub product_size: usize,
    /// hypothesis satisfied but the product missed the group — this would
    /// contradict a proven statement, so it flags an implementation bug
    pub critical: bool,
}

/// Product-coverage criterion: if ∏|Xᵢ| ≥ |G|^t · l^{2−t} (t ≥ 3 sets, l the
/// minimal nontrivial real representation dimension), the product X₁⋯X_t
/// must fill the whole group. Products are exact either way.
pub fn gowers_verify<G: GroupOps>(g: &G, l: u64, xs: &[ElementSet]) -> Result<GowersReport> {
    let t = xs.len();
    if t < 3 {
        return Err(Error::Invalid("need at least three sets".into()));
    }
    let n = g.order();
    let mut lhs = BigUint::from(1u32);
    for x in xs {
        if x.universe() != n {
            return Err(Error::OwnerMismatch);
        }
        lhs *= BigUint::from(x.len());
    }
    lhs *= BigUint::from(l).pow(t as u32 - 2);
    let rhs = BigUint::from(n).pow(t as u32);
    let hypothesis_holds = lhs >= rhs;
    let mut acc = xs[0].clone();
    for x in &xs[1..] {
        acc = set_product(g, &acc, x)?;
    }
    let covered = acc.len() == n;
    Ok(GowersReport {
        t,
        sizes: xs.iter().map(|x| x.len()).collect(),
        hypothesis_holds,
        covered,
        product_size: acc.len(),
        critical: hypothesis_holds && !covered,
    })
}

// ---------------------------------------------------------------------------
// identity suite: set-product factorizations of [H,G] and twisted covers
// ---------------------------------------------------------------------------

/// ∏ᵢ[H,gᵢ] ⊆ [H,G], and for n = 1..n_max the product [H,ₙG]·∏ᵢ[H,gᵢ]
/// spans [H,G], where [H,ₙG] is the n-fold iterated commutator.
pub fn comm_factorization_check<G: GroupOps>(g: &G, h: &Subgrp, n_max: usize) -> Result<bool> {
    let whole = Subgrp::whole(g);
    let target = comm_subgroup(g, h, &whole);
    let p = ordered_comm_product(g, h, g.gen_indices())?;
    if !p.is_subset_of(&target.elements) {
        return Ok(false);
    }
    for n in 1..=n_max {
        let kn = iterated_comm_with_group(g, h, n);
        let prod = set_product(g, &kn.elements, &p)?;
        let span = closure(g, &prod.to_vec());
        if span.elements != target.elements {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pointwise identity [x,α]^y = [xy,α]·[y^α,α⁻¹] on the given pairs, where
/// [x,α] = x⁻¹·x^α.
pub fn auto_comm_identity_check<G: GroupOps>(
    g: &G,
    alpha: &Automorphism,
    pairs: &[(u32, u32)],
) -> bool {
    let alpha_inv = alpha.inverse();
    pairs.iter().all(|&(x, y)| {
        let lhs = g.conj(alpha.comm_with(g, x), y);
        let rhs = g.mul(
            alpha.comm_with(g, g.mul(x, y)),
            alpha_inv.comm_with(g, alpha.apply(y)),
        );
        lhs == rhs
    })
}

/// Set inclusion [G,α]^G ⊆ [G,α]·[G,α⁻¹], checked exhaustively.
pub fn auto_comm_set_inclusion<G: GroupOps>(g: &G, alpha: &Automorphism) -> Result<bool> {
    let n = g.order();
    let ga = ElementSet::from_iter(n, (0..n as u32).map(|x| alpha.comm_with(g, x)));
    let alpha_inv = alpha.inverse();
    let gai = ElementSet::from_iter(n, (0..n as u32).map(|x| alpha_inv.comm_with(g, x)));
    let prod = set_product(g, &ga, &gai)?;
    for c in ga.iter() {
        for y in 0..n as u32 {
            if !prod.contains(g.conj(c, y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Layered cover of M by the twisted commutators {m⁻¹·m^α : m ∈ M}; α must
/// preserve M.
pub fn auto_comm_cover<G: GroupOps>(
    g: &G,
    m: &Subgrp,
    alpha: &Automorphism,
    max_f: usize,
) -> Result<WidthProfile> {
    let base = ElementSet::from_iter(
        g.order(),
        m.elements.iter().map(|x| alpha.comm_with(g, x)),
    );
    if !base.is_subset_of(&m.elements) {
        return Err(Error::Hypothesis("automorphism does not preserve M".into()));
    }
    layered_profile(g, &base, m, max_f)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCover {
    pub class_size: usize,
    pub exponent: Option<usize>,
}

/// For each nontrivial conjugacy class Y, the minimal m with Y^{*m} = G.
pub fn class_cover_profiles(g: &GroupTable, max_f: usize) -> Result<Vec<ClassCover>> {
    let whole = Subgrp::whole(g);
    let mut out = Vec::new();
    for class in &g.classes().classes {
        if class[0] == 0 {
            continue;
        }
        let base = ElementSet::from_iter(g.order(), class.iter().copied());
        let profile = layered_profile(g, &base, &whole, max_f)?;
        out.push(ClassCover {
            class_size: class.len(),
            exponent: profile.reached_at,
        });
    }
    Ok(out)
}

/// Largest measured ratio m / ⌈log|G|/log|Y|⌉ over the covered classes — the
/// fitted constant of the class-cover law, reported rather than assumed.
pub fn fitted_cover_constant(g: &GroupTable, covers: &[ClassCover]) -> Option<f64> {
    let n = g.order() as f64;
    covers
        .iter()
        .filter_map(|c| {
            let m = c.exponent? as f64;
            let denom = (n.ln() / (c.class_size as f64).ln()).ceil();
            Some(m / denom)
        })
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
}
