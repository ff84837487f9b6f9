//! Twisted-commutator rewriting. The basic object is the value
//! T_{α,β}(x,y) = x⁻¹·y⁻¹·x^α·y^β for automorphisms α, β. This module
//! implements the rewriting moves on products of such values — merging two
//! factors into one (in either the α- or the β-coordinate), shifting a group
//! element through a factor, and the reduction of a four-factor product to a
//! single factor whose automorphisms lie in a prescribed index-2 subgroup —
//! each returning a witness whose two sides are re-evaluated and compared on
//! every call. It also provides the coordinate bijections Θ and Ψ for
//! products of commutators on a direct power S^J, identity checks for tuple
//! commutator products, and coverage experiments for twisted-commutator
//! image sets.

use std::sync::Arc;

use serde::Serialize;

use crate::autos::Automorphism;
use crate::elset::ElementSet;
use crate::error::{Error, Result};
use crate::subgroup::{closure, derived, normal_closure, quotient, Subgrp};
use crate::table::{GroupOps, GroupTable};
use crate::width::set_product;

/// T_{α,β}(x,y) = x⁻¹ y⁻¹ x^α y^β.
pub fn t_value<G: GroupOps>(g: &G, alpha: &Automorphism, beta: &Automorphism, x: u32, y: u32) -> u32 {
    g.mul(
        g.mul(g.inv(x), g.inv(y)),
        g.mul(alpha.apply(x), beta.apply(y)),
    )
}

/// A product of twisted-commutator factors together with fixed left/right
/// residue elements picked up by rewriting; evaluation multiplies the factors
/// in order between the residues.
#[derive(Clone)]
pub struct TwistedForm {
    pub pairs: Vec<(Automorphism, Automorphism)>,
    pub left: u32,
    pub right: u32,
}

impl TwistedForm {
    pub fn new(pairs: Vec<(Automorphism, Automorphism)>) -> Self {
        TwistedForm {
            pairs,
            left: 0,
            right: 0,
        }
    }

    /// left · ∏ᵢ T_{αᵢ,βᵢ}(xᵢ,yᵢ) · right.
    pub fn evaluate<G: GroupOps>(&self, g: &G, args: &[(u32, u32)]) -> Result<u32> {
        if args.len() != self.pairs.len() {
            return Err(Error::Invalid("argument count != factor count".into()));
        }
        let mut acc = self.left;
        for ((a, b), &(x, y)) in self.pairs.iter().zip(args) {
            acc = g.mul(acc, t_value(g, a, b, x, y));
        }
        Ok(g.mul(acc, self.right))
    }
}

/// One verified rewrite: `input` and `left · T_merged(output[..2]) · right`
/// evaluate to the same element `value`, and `output` determines `input`.
#[derive(Clone, Debug)]
pub struct RewriteWitness {
    pub input: [u32; 4],
    /// merged coordinates first, spectator coordinates last
    pub output: [u32; 4],
    pub left: u32,
    pub right: u32,
    pub value: u32,
}

/// Both single-factor forms of a two-factor product: one merging the α-parts
/// (new pair (α₁α₂, β₂)), one merging the β-parts (new pair (α₁, β₁β₂)).
#[derive(Clone, Debug)]
pub struct MergeWitness {
    pub alpha_form: RewriteWitness,
    pub beta_form: RewriteWitness,
}

// T_{α₁,β₁}(x₁,x₂)·T_{α₂,β₂}(x₃,x₄) = A · T_{α₁α₂,β₂}(t,w) · B with
//   z = x₃·(x₁^{α₁} x₂^{β₁})⁻¹,
//   t = x₁ · x₂^{β₁α₁⁻¹} · z^{α₂β₂α₂⁻¹α₁⁻¹},  w = z^{−α₂}·x₄·z·x₂,
//   A = (x₂^{β₁} · z^{α₂β₂α₂⁻¹})^{α₁⁻¹},      B = (z·x₂)^{−β₂}.
// Exponent strings compose left to right; x^{−γ} means (x⁻¹)^γ.
fn merge_alpha<G: GroupOps>(
    g: &G,
    a1: &Automorphism,
    b1: &Automorphism,
    a2: &Automorphism,
    b2: &Automorphism,
    x: [u32; 4],
) -> ([u32; 4], u32, u32) {
    let a1i = a1.inverse();
    let a2i = a2.inverse();
    let [x1, x2, x3, x4] = x;
    let z = g.mul(x3, g.inv(g.mul(a1.apply(x1), b1.apply(x2))));
    let w = g.mul(g.mul(g.mul(a2.apply(g.inv(z)), x4), z), x2);
    let t = g.mul(
        g.mul(x1, a1i.apply(b1.apply(x2))),
        a1i.apply(a2i.apply(b2.apply(a2.apply(z)))),
    );
    let left = a1i.apply(g.mul(b1.apply(x2), a2i.apply(b2.apply(a2.apply(z)))));
    let right = b2.apply(g.inv(g.mul(z, x2)));
    ([t, w, x2, z], left, right)
}

fn merge_alpha_invert<G: GroupOps>(
    g: &G,
    a1: &Automorphism,
    b1: &Automorphism,
    a2: &Automorphism,
    b2: &Automorphism,
    out: [u32; 4],
) -> [u32; 4] {
    let a1i = a1.inverse();
    let a2i = a2.inverse();
    let [t, w, x2, z] = out;
    let x1 = g.mul(
        g.mul(t, g.inv(a1i.apply(a2i.apply(b2.apply(a2.apply(z)))))),
        g.inv(a1i.apply(b1.apply(x2))),
    );
    let x3 = g.mul(g.mul(z, a1.apply(x1)), b1.apply(x2));
    let x4 = g.mul(g.mul(g.mul(a2.apply(z), w), g.inv(x2)), g.inv(z));
    [x1, x2, x3, x4]
}

// T_{α₁,β₁}(x₁,x₂)·T_{α₂,β₂}(x₃,x₄) = C · T_{α₁,β₁β₂}(v,x₂) · D with
//   u = x₂^{β₁}·x₃⁻¹·x₄⁻¹,
//   v = x₁ · u^{α₁⁻¹} · x₃^{α₂α₁⁻¹} · u^{−β₂α₁⁻¹},
//   C = (u · x₃^{α₂} · u^{−β₂})^{α₁⁻¹},  D = x₃^{−β₂}.
fn merge_beta<G: GroupOps>(
    g: &G,
    a1: &Automorphism,
    _b1: &Automorphism,
    a2: &Automorphism,
    b2: &Automorphism,
    x: [u32; 4],
    u: u32,
) -> ([u32; 4], u32, u32) {
    let a1i = a1.inverse();
    let [x1, x2, x3, _x4] = x;
    let v = g.mul(
        g.mul(g.mul(x1, a1i.apply(u)), a1i.apply(a2.apply(x3))),
        a1i.apply(b2.apply(g.inv(u))),
    );
    let left = a1i.apply(g.mul(g.mul(u, a2.apply(x3)), b2.apply(g.inv(u))));
    let right = b2.apply(g.inv(x3));
    ([v, x2, u, x3], left, right)
}

fn merge_beta_invert<G: GroupOps>(
    g: &G,
    a1: &Automorphism,
    b1: &Automorphism,
    a2: &Automorphism,
    b2: &Automorphism,
    out: [u32; 4],
) -> [u32; 4] {
    let a1i = a1.inverse();
    let [v, x2, u, x3] = out;
    let x4 = g.mul(g.mul(g.inv(u), b1.apply(x2)), g.inv(x3));
    let x1 = g.mul(
        g.mul(g.mul(v, a1i.apply(b2.apply(u))), a1i.apply(a2.apply(g.inv(x3)))),
        a1i.apply(g.inv(u)),
    );
    [x1, x2, x3, x4]
}

/// Rewrite T_{α₁,β₁}(x₁,x₂)·T_{α₂,β₂}(x₃,x₄) as a single twisted commutator
/// in both possible ways: merged pair (α₁α₂, β₂) and merged pair (α₁, β₁β₂).
/// Both equalities are re-evaluated, and the coordinate maps are inverted and
/// checked against the input; any mismatch is an implementation bug and comes
/// back as an error.
pub fn merge_ttt<G: GroupOps>(
    g: &G,
    a1: &Automorphism,
    b1: &Automorphism,
    a2: &Automorphism,
    b2: &Automorphism,
    x: [u32; 4],
) -> Result<MergeWitness> {
    let lhs = g.mul(
        t_value(g, a1, b1, x[0], x[1]),
        t_value(g, a2, b2, x[2], x[3]),
    );

    let (out_a, la, ra) = merge_alpha(g, a1, b1, a2, b2, x);
    let a12 = a1.compose(a2);
    let mid_a = t_value(g, &a12, b2, out_a[0], out_a[1]);
    if g.mul(g.mul(la, mid_a), ra) != lhs {
        return Err(Error::Invalid("alpha-merge identity failed".into()));
    }
    if merge_alpha_invert(g, a1, b1, a2, b2, out_a) != x {
        return Err(Error::Invalid("alpha-merge inverse failed".into()));
    }

    let u = g.mul(g.mul(b1.apply(x[1]), g.inv(x[2])), g.inv(x[3]));
    let (out_b, lb, rb) = merge_beta(g, a1, b1, a2, b2, x, u);
    let b12 = b1.compose(b2);
    let mid_b = t_value(g, a1, &b12, out_b[0], out_b[1]);
    if g.mul(g.mul(lb, mid_b), rb) != lhs {
        return Err(Error::Invalid("beta-merge identity failed".into()));
    }
    if merge_beta_invert(g, a1, b1, a2, b2, out_b) != x {
        return Err(Error::Invalid("beta-merge inverse failed".into()));
    }

    Ok(MergeWitness {
        alpha_form: RewriteWitness {
            input: x,
            output: out_a,
            left: la,
            right: ra,
            value: lhs,
        },
        beta_form: RewriteWitness {
            input: x,
            output: out_b,
            left: lb,
            right: rb,
            value: lhs,
        },
    })
}

/// Result of pushing an element z leftward out of a twisted commutator:
/// z·T_{α,β}(x,y) = T_{α,β}(x′,y′)·z^γ with γ = [α⁻¹,β].
#[derive(Clone, Debug)]
pub struct ShiftWitness {
    pub x_new: u32,
    pub y_new: u32,
    /// z^γ
    pub residue: u32,
    pub gamma: Automorphism,
    /// the common element value z·T_{α,β}(x,y)
    pub value: u32,
}

/// x′ = z^{αβ⁻¹α⁻¹}·x·z⁻¹ and y′ = z^{αβ⁻¹}·y·z^{−αβ⁻¹α⁻¹}; the identity is
/// re-evaluated on every call.
pub fn shift_tconj<G: GroupOps>(
    g: &G,
    z: u32,
    alpha: &Automorphism,
    beta: &Automorphism,
    x: u32,
    y: u32,
) -> Result<ShiftWitness> {
    let ai = alpha.inverse();
    let bi = beta.inverse();
    let z_abiai = ai.apply(bi.apply(alpha.apply(z)));
    let z_abi = bi.apply(alpha.apply(z));
    let x_new = g.mul(g.mul(z_abiai, x), g.inv(z));
    let y_new = g.mul(g.mul(z_abi, y), g.inv(z_abiai));
    let gamma = alpha.compose(&bi).compose(&ai).compose(beta);
    let residue = gamma.apply(z);
    let value = g.mul(z, t_value(g, alpha, beta, x, y));
    if g.mul(t_value(g, alpha, beta, x_new, y_new), residue) != value {
        return Err(Error::Invalid("conjugation-shift identity failed".into()));
    }
    Ok(ShiftWitness {
        x_new,
        y_new,
        residue,
        gamma,
        value,
    })
}

/// For inner α, β given by conjugating elements a, b: with t = [a⁻¹, b],
/// x̄ = t·b⁻¹·x and ȳ = t·b⁻¹·a·y·b·t⁻¹, the twisted commutator collapses to
/// an ordinary one: T_{α,β}(x,y) = [x̄, ȳ]·t.
#[derive(Clone, Debug)]
pub struct InnWitness {
    pub t: u32,
    pub x_bar: u32,
    pub y_bar: u32,
    pub value: u32,
}

pub fn inn_witness<G: GroupOps>(g: &G, a: u32, b: u32, x: u32, y: u32) -> Result<InnWitness> {
    let t = g.comm(g.inv(a), b);
    let tb = g.mul(t, g.inv(b));
    let x_bar = g.mul(tb, x);
    let y_bar = g.mul(g.mul(g.mul(tb, a), g.mul(y, b)), g.inv(t));
    let value = g.mul(
        g.mul(g.inv(x), g.inv(y)),
        g.mul(g.conj(x, a), g.conj(y, b)),
    );
    if g.mul(g.comm(x_bar, y_bar), t) != value {
        return Err(Error::Invalid(
            "inner-pair commutator rewrite failed".into(),
        ));
    }
    Ok(InnWitness {
        t,
        x_bar,
        y_bar,
        value,
    })
}

/// If an automorphism is conjugation by some element, return one such
/// element. Agreement on a generating set pins the automorphism, so the scan
/// checks candidates against the group's recorded generators only.
pub fn inner_conjugator<G: GroupOps>(g: &G, a: &Automorphism) -> Option<u32> {
    let gens = g.gen_indices();
    let n = g.order() as u32;
    if gens.is_empty() {
        return (0..n).find(|&c| (0..n).all(|x| g.conj(x, c) == a.apply(x)));
    }
    (0..n).find(|&c| gens.iter().all(|&p| g.conj(p, c) == a.apply(p)))
}

/// Which of the three reduction branches applied to a factor pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MergeBranch {
    /// the first factor's automorphism already lies in the subgroup
    First,
    /// the second factor's does
    Second,
    /// neither does, so the two factors were merged
    Product,
}

// Reduce T_{c1,d1}(x₁,x₂)·T_{c2,d2}(x₃,x₄) to left·T_{γ,η}(hat)·right where
// the distinguished coordinate of (γ,η) lies in the index-2 subgroup. When
// `on_beta` is false the branch test runs on the α-parts (c1, c2, c1c2) and
// the merge is the α-form; otherwise on the β-parts with the β-form merge.
#[allow(clippy::too_many_arguments)]
fn pair_reduce<G: GroupOps>(
    g: &G,
    c1: &Automorphism,
    d1: &Automorphism,
    c2: &Automorphism,
    d2: &Automorphism,
    in_delta: &dyn Fn(&Automorphism) -> bool,
    x: [u32; 4],
    on_beta: bool,
) -> Result<(
    Automorphism,
    Automorphism,
    (u32, u32),
    (u32, u32),
    u32,
    u32,
    MergeBranch,
)> {
    let (k1, k2) = if on_beta { (d1, d2) } else { (c1, c2) };
    let lhs = g.mul(
        t_value(g, c1, d1, x[0], x[1]),
        t_value(g, c2, d2, x[2], x[3]),
    );
    let (gam, eta, hat, tilde, left, right, branch) = if in_delta(k1) {
        let q = t_value(g, c2, d2, x[2], x[3]);
        (
            c1.clone(),
            d1.clone(),
            (x[0], x[1]),
            (x[2], x[3]),
            0,
            q,
            MergeBranch::First,
        )
    } else if in_delta(k2) {
        let p = t_value(g, c1, d1, x[0], x[1]);
        (
            c2.clone(),
            d2.clone(),
            (x[2], x[3]),
            (x[0], x[1]),
            p,
            0,
            MergeBranch::Second,
        )
    } else if in_delta(&k1.compose(k2)) {
        if on_beta {
            let u = g.mul(g.mul(d1.apply(x[1]), g.inv(x[2])), g.inv(x[3]));
            let (out, l, r) = merge_beta(g, c1, d1, c2, d2, x, u);
            (
                c1.clone(),
                d1.compose(d2),
                (out[0], out[1]),
                (out[2], out[3]),
                l,
                r,
                MergeBranch::Product,
            )
        } else {
            let (out, l, r) = merge_alpha(g, c1, d1, c2, d2, x);
            (
                c1.compose(c2),
                d2.clone(),
                (out[0], out[1]),
                (out[2], out[3]),
                l,
                r,
                MergeBranch::Product,
            )
        }
    } else {
        return Err(Error::Hypothesis(
            "no automorphism product lies in the claimed index-2 subgroup".into(),
        ));
    };
    let mid = t_value(g, &gam, &eta, hat.0, hat.1);
    if g.mul(g.mul(left, mid), right) != lhs {
        return Err(Error::Invalid("pair reduction identity failed".into()));
    }
    Ok((gam, eta, hat, tilde, left, right, branch))
}

// Invert one pair_reduce step: recover the four input coordinates from the
// merged and spectator pairs. The branch is a function of the automorphisms
// alone, so it is passed back in.
fn pair_reduce_invert<G: GroupOps>(
    g: &G,
    c1: &Automorphism,
    d1: &Automorphism,
    c2: &Automorphism,
    d2: &Automorphism,
    branch: MergeBranch,
    hat: (u32, u32),
    tilde: (u32, u32),
    on_beta: bool,
) -> [u32; 4] {
    match branch {
        MergeBranch::First => [hat.0, hat.1, tilde.0, tilde.1],
        MergeBranch::Second => [tilde.0, tilde.1, hat.0, hat.1],
        MergeBranch::Product => {
            let out = [hat.0, hat.1, tilde.0, tilde.1];
            if on_beta {
                merge_beta_invert(g, c1, d1, c2, d2, out)
            } else {
                merge_alpha_invert(g, c1, d1, c2, d2, out)
            }
        }
    }
}

/// A verified reduction of a four-factor twisted-commutator product to
/// left·T_{γ,δ}(x*)·right with γ, δ in the index-2 subgroup.
#[derive(Clone, Debug)]
pub struct ReduceWitness {
    pub gamma: Automorphism,
    pub delta: Automorphism,
    pub x_star: (u32, u32),
    pub x_tilde: [u32; 6],
    pub left: u32,
    pub right: u32,
    pub alpha_branches: (MergeBranch, MergeBranch),
    pub beta_branch: MergeBranch,
    pub value: u32,
}

/// Rewrite ∏ᵢ₌₁..₄ T_{αᵢ,βᵢ}(x_{2i−1}, x_{2i}) as P(x̃)·T_{γ,δ}(x*)·Q(x̃)
/// with γ, δ in the subgroup recognized by `in_delta` (which must have index
/// 2: whenever neither of two automorphisms is recognized, their product must
/// be). Each internal step and the final equality are re-evaluated. When
/// several branch conditions hold at once the first in the order
/// (first factor, second factor, product) is taken; any choice satisfies the
/// identity.
pub fn reduce_index2<G: GroupOps>(
    g: &G,
    pairs: &[(Automorphism, Automorphism); 4],
    in_delta: &dyn Fn(&Automorphism) -> bool,
    x: [u32; 8],
) -> Result<ReduceWitness> {
    let (a1, b1) = &pairs[0];
    let (a2, b2) = &pairs[1];
    let (a3, b3) = &pairs[2];
    let (a4, b4) = &pairs[3];
    let (g1, e1, hat1, tilde1, p1, q1, br1) = pair_reduce(
        g,
        a1,
        b1,
        a2,
        b2,
        in_delta,
        [x[0], x[1], x[2], x[3]],
        false,
    )?;
    let (g2, e2, hat2, tilde2, p2, q2, br2) = pair_reduce(
        g,
        a3,
        b3,
        a4,
        b4,
        in_delta,
        [x[4], x[5], x[6], x[7]],
        false,
    )?;

    // slide the inter-factor residue q1·p2 through the second reduced factor
    let z = g.mul(q1, p2);
    let shift = shift_tconj(g, z, &g2, &e2, hat2.0, hat2.1)?;
    let bar2 = (shift.x_new, shift.y_new);

    // now merge in the β-coordinate, where both α-parts already sit in Δ
    let (gam, del, star, tilde3, p3, q3, br3) = pair_reduce(
        g,
        &g1,
        &e1,
        &g2,
        &e2,
        in_delta,
        [hat1.0, hat1.1, bar2.0, bar2.1],
        true,
    )?;
    if !in_delta(&gam) || !in_delta(&del) {
        return Err(Error::Hypothesis(
            "membership predicate is not consistent with an index-2 subgroup".into(),
        ));
    }

    let left = g.mul(p1, p3);
    let right = g.mul(g.mul(q3, shift.residue), q2);
    let x_tilde = [tilde1.0, tilde1.1, tilde2.0, tilde2.1, tilde3.0, tilde3.1];
    let mut lhs = 0u32;
    for (i, (a, b)) in pairs.iter().enumerate() {
        lhs = g.mul(lhs, t_value(g, a, b, x[2 * i], x[2 * i + 1]));
    }
    let mid = t_value(g, &gam, &del, star.0, star.1);
    if g.mul(g.mul(left, mid), right) != lhs {
        return Err(Error::Invalid("index-2 reduction identity failed".into()));
    }
    Ok(ReduceWitness {
        gamma: gam,
        delta: del,
        x_star: star,
        x_tilde,
        left,
        right,
        alpha_branches: (br1, br2),
        beta_branch: br3,
        value: lhs,
    })
}

/// Invert the coordinate map of `reduce_index2`: reconstruct the eight input
/// coordinates from (x*, x̃). The branch structure depends only on the
/// automorphisms, so it is recomputed from the same membership predicate.
pub fn reduce_index2_invert<G: GroupOps>(
    g: &G,
    pairs: &[(Automorphism, Automorphism); 4],
    in_delta: &dyn Fn(&Automorphism) -> bool,
    x_star: (u32, u32),
    x_tilde: [u32; 6],
) -> Result<[u32; 8]> {
    let (a1, b1) = &pairs[0];
    let (a2, b2) = &pairs[1];
    let (a3, b3) = &pairs[2];
    let (a4, b4) = &pairs[3];
    let pick = |c1: &Automorphism,
                d1: &Automorphism,
                c2: &Automorphism,
                d2: &Automorphism,
                on_beta: bool|
     -> Result<(Automorphism, Automorphism, MergeBranch)> {
        let (k1, k2) = if on_beta { (d1, d2) } else { (c1, c2) };
        if in_delta(k1) {
            Ok((c1.clone(), d1.clone(), MergeBranch::First))
        } else if in_delta(k2) {
            Ok((c2.clone(), d2.clone(), MergeBranch::Second))
        } else if in_delta(&k1.compose(k2)) {
            if on_beta {
                Ok((c1.clone(), d1.compose(d2), MergeBranch::Product))
            } else {
                Ok((c1.compose(c2), d2.clone(), MergeBranch::Product))
            }
        } else {
            Err(Error::Hypothesis(
                "no automorphism product lies in the claimed index-2 subgroup".into(),
            ))
        }
    };

    let (g1, e1, br1) = pick(a1, b1, a2, b2, false)?;
    let (g2, e2, br2) = pick(a3, b3, a4, b4, false)?;
    let tilde1 = (x_tilde[0], x_tilde[1]);
    let tilde2 = (x_tilde[2], x_tilde[3]);
    let tilde3 = (x_tilde[4], x_tilde[5]);

    // spectator values determine the slid residue z
    let q1 = match br1 {
        MergeBranch::First => t_value(g, a2, b2, tilde1.0, tilde1.1),
        MergeBranch::Second => 0,
        MergeBranch::Product => {
            // B = (z·x₂)^{−β₂} with spectators (x₂, z)
            b2.apply(g.inv(g.mul(tilde1.1, tilde1.0)))
        }
    };
    let p2 = match br2 {
        MergeBranch::First => 0,
        MergeBranch::Second => t_value(g, a3, b3, tilde2.0, tilde2.1),
        MergeBranch::Product => {
            // A = (x₂^{β₁}·z^{α₂β₂α₂⁻¹})^{α₁⁻¹} with spectators (x₂, z)
            let a3i = a3.inverse();
            let a4i = a4.inverse();
            a3i.apply(g.mul(
                b3.apply(tilde2.0),
                a4i.apply(b4.apply(a4.apply(tilde2.1))),
            ))
        }
    };
    let z = g.mul(q1, p2);

    let (_, _, br3) = pick(&g1, &e1, &g2, &e2, true)?;
    let four_b = pair_reduce_invert(g, &g1, &e1, &g2, &e2, br3, x_star, tilde3, true);
    let (hat1, bar2) = ((four_b[0], four_b[1]), (four_b[2], four_b[3]));

    // undo the conjugation shift on the second merged pair
    let e2i = e2.inverse();
    let g2i = g2.inverse();
    let z_abiai = g2i.apply(e2i.apply(g2.apply(z)));
    let z_abi = e2i.apply(g2.apply(z));
    let hat2 = (
        g.mul(g.mul(g.inv(z_abiai), bar2.0), z),
        g.mul(g.mul(g.inv(z_abi), bar2.1), z_abiai),
    );

    let first = pair_reduce_invert(g, a1, b1, a2, b2, br1, hat1, tilde1, false);
    let second = pair_reduce_invert(g, a3, b3, a4, b4, br2, hat2, tilde2, false);
    Ok([
        first[0], first[1], first[2], first[3], second[0], second[1], second[2], second[3],
    ])
}

/// 𝐜(u, g) = ∏ⱼ [uⱼ, gⱼ].
pub fn comm_chain<G: GroupOps>(g: &G, us: &[u32], gs: &[u32]) -> u32 {
    us.iter()
        .zip(gs)
        .fold(0, |acc, (&u, &h)| g.mul(acc, g.comm(u, h)))
}

/// τⱼ(g, v) = vⱼ·[g_{j−1}, v_{j−1}]·…·[g₁, v₁] (j is a 0-based index here).
pub fn tau_element<G: GroupOps>(g: &G, gs: &[u32], vs: &[u32], j: usize) -> u32 {
    let mut acc = vs[j];
    for k in (0..j).rev() {
        acc = g.mul(acc, g.comm(gs[k], vs[k]));
    }
    acc
}

/// The difference between a commutator-tuple product taken at a·u and at u is
/// itself a product of single commutators, conjugated by τ-elements and by
/// the reversed prefix products. Checks the identity for the given tuples.
pub fn uv_identity_holds<G: GroupOps>(
    g: &G,
    gs: &[u32],
    a_tuples: &[Vec<u32>],
    u_tuples: &[Vec<u32>],
) -> bool {
    assert_eq!(a_tuples.len(), u_tuples.len());
    let m = gs.len();
    let mut lhs1 = 0u32;
    let mut lhs2 = 0u32;
    for (au, u) in a_tuples.iter().zip(u_tuples) {
        assert!(au.len() == m && u.len() == m);
        let prod: Vec<u32> = au.iter().zip(u).map(|(&a, &v)| g.mul(a, v)).collect();
        lhs1 = g.mul(lhs1, comm_chain(g, &prod, gs));
        lhs2 = g.mul(lhs2, comm_chain(g, u, gs));
    }
    let lhs = g.mul(lhs1, g.inv(lhs2));

    let mut rhs = 0u32;
    let mut w = 0u32; // 𝐜(u(i−1),g)⁻¹ ⋯ 𝐜(u(1),g)⁻¹
    for (a, u) in a_tuples.iter().zip(u_tuples) {
        let mut term = 0u32;
        for j in 0..m {
            term = g.mul(term, g.conj(g.comm(a[j], gs[j]), tau_element(g, gs, u, j)));
        }
        rhs = g.mul(rhs, g.conj(term, w));
        w = g.mul(g.inv(comm_chain(g, u, gs)), w);
    }
    lhs == rhs
}

/// ⟨gⱼ^{τⱼ(g,u)}⟩ and ⟨gⱼ^{uⱼ·hⱼ}⟩ with hⱼ = g_{j−1}⁻¹⋯g₁⁻¹ generate the
/// same subgroup.
pub fn newgens_holds<G: GroupOps>(g: &G, gs: &[u32], us: &[u32]) -> bool {
    let m = gs.len();
    let first: Vec<u32> = (0..m)
        .map(|j| g.conj(gs[j], tau_element(g, gs, us, j)))
        .collect();
    let mut second = Vec::with_capacity(m);
    let mut h = 0u32;
    for j in 0..m {
        second.push(g.conj(gs[j], g.mul(us[j], h)));
        h = g.mul(g.inv(gs[j]), h);
    }
    closure(g, &first).elements == closure(g, &second).elements
}

/// An automorphism of the direct power S^J that permutes the coordinates and
/// twists each by an automorphism of S: (x^g)(j) = t_j(x(j·g⁻¹)).
#[derive(Clone)]
pub struct MonomialAuto {
    /// j ↦ j·g on coordinate indices
    pub point_map: Vec<usize>,
    /// inverse of `point_map`
    pub point_inv: Vec<usize>,
    /// twists[j] is applied to the coordinate landing in slot j
    pub twists: Vec<Automorphism>,
}

impl MonomialAuto {
    pub fn new(point_map: Vec<usize>, twists: Vec<Automorphism>) -> Result<Self> {
        let n = point_map.len();
        if twists.len() != n {
            return Err(Error::Invalid("twist count != point count".into()));
        }
        let mut point_inv = vec![usize::MAX; n];
        for (j, &k) in point_map.iter().enumerate() {
            if k >= n || point_inv[k] != usize::MAX {
                return Err(Error::Invalid("point map is not a permutation".into()));
            }
            point_inv[k] = j;
        }
        Ok(MonomialAuto {
            point_map,
            point_inv,
            twists,
        })
    }

    /// Pure coordinate permutation, all twists trivial.
    pub fn permutation(s_order: usize, point_map: Vec<usize>) -> Result<Self> {
        let n = point_map.len();
        MonomialAuto::new(point_map, vec![Automorphism::identity(s_order); n])
    }

    pub fn n_points(&self) -> usize {
        self.point_map.len()
    }

    pub fn apply<G: GroupOps>(&self, _s: &G, x: &[u32]) -> Vec<u32> {
        let n = self.n_points();
        let mut out = vec![0u32; n];
        for j in 0..n {
            out[j] = self.twists[j].apply(x[self.point_inv[j]]);
        }
        out
    }

    /// [x, g] = x⁻¹·x^g computed coordinatewise.
    pub fn comm<G: GroupOps>(&self, s: &G, x: &[u32]) -> Vec<u32> {
        let n = self.n_points();
        let mut out = vec![0u32; n];
        for j in 0..n {
            out[j] = s.mul(s.inv(x[j]), self.twists[j].apply(x[self.point_inv[j]]));
        }
        out
    }

    /// Number of coordinates the underlying point permutation moves.
    pub fn moved_points(&self) -> usize {
        self.point_map
            .iter()
            .enumerate()
            .filter(|&(j, &k)| j != k)
            .count()
    }
}

/// Do the point permutations of `gens` generate a transitive group?
pub fn points_transitive(gens: &[MonomialAuto]) -> bool {
    if gens.is_empty() {
        return false;
    }
    let n = gens[0].n_points();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(j) = stack.pop() {
        for g in gens {
            for k in [g.point_map[j], g.point_inv[j]] {
                if !seen[k] {
                    seen[k] = true;
                    count += 1;
                    stack.push(k);
                }
            }
        }
    }
    count == n
}

// Cycles of a point permutation; each cycle is rotated to start at its
// minimal point under `pos` (natural order when pos is the identity), and
// cycles are listed by that minimal point in increasing `pos`.
fn cycles_by_order(point_map: &[usize], pos: &[usize]) -> Vec<Vec<usize>> {
    let n = point_map.len();
    let mut by_pos = vec![usize::MAX; n];
    for (j, &p) in pos.iter().enumerate() {
        by_pos[p] = j;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for p in 0..n {
        let start = by_pos[p];
        if seen[start] {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut j = point_map[start];
        while j != start {
            seen[j] = true;
            cyc.push(j);
            j = point_map[j];
        }
        out.push(cyc);
    }
    out
}

/// Image of a tuple x ∈ (S^J)^m under Θ: the coordinates of each xᵢ at the
/// leading point of each cycle of its point permutation, together with the
/// coordinates of [xᵢ, gᵢ] at all remaining points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaImage {
    /// per generator, per cycle: xᵢ(δ) at the cycle's leading point δ
    pub base: Vec<Vec<u32>>,
    /// per generator, per cycle: [xᵢ,gᵢ] along the cycle after δ
    pub comm: Vec<Vec<Vec<u32>>>,
}

fn check_tuple_shape(gens: &[MonomialAuto], x: &[Vec<u32>]) -> Result<usize> {
    if gens.is_empty() || gens.len() != x.len() {
        return Err(Error::Invalid("tuple length != generator count".into()));
    }
    let n = gens[0].n_points();
    for (g, xi) in gens.iter().zip(x) {
        if g.n_points() != n || xi.len() != n {
            return Err(Error::Invalid("coordinate counts disagree".into()));
        }
    }
    Ok(n)
}

pub fn theta_map<G: GroupOps>(
    s: &G,
    gens: &[MonomialAuto],
    x: &[Vec<u32>],
) -> Result<ThetaImage> {
    let n = check_tuple_shape(gens, x)?;
    let id_pos: Vec<usize> = (0..n).collect();
    let mut base = Vec::with_capacity(gens.len());
    let mut comm = Vec::with_capacity(gens.len());
    for (g, xi) in gens.iter().zip(x) {
        let y = g.comm(s, xi);
        let mut b = Vec::new();
        let mut c = Vec::new();
        for cyc in cycles_by_order(&g.point_map, &id_pos) {
            b.push(xi[cyc[0]]);
            c.push(cyc[1..].iter().map(|&j| y[j]).collect());
        }
        base.push(b);
        comm.push(c);
    }
    Ok(ThetaImage { base, comm })
}

/// Reconstruct x from its Θ-image by walking each cycle: the leading
/// coordinate is given, and x(j) = t_j(x(j⁻))·y(j)⁻¹ recovers the rest.
pub fn theta_inverse<G: GroupOps>(
    s: &G,
    gens: &[MonomialAuto],
    img: &ThetaImage,
) -> Result<Vec<Vec<u32>>> {
    if img.base.len() != gens.len() || img.comm.len() != gens.len() {
        return Err(Error::Invalid("image shape != generator count".into()));
    }
    let n = gens[0].n_points();
    let id_pos: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let cycles = cycles_by_order(&g.point_map, &id_pos);
        if img.base[i].len() != cycles.len() || img.comm[i].len() != cycles.len() {
            return Err(Error::Invalid("image shape != cycle structure".into()));
        }
        let mut xi = vec![0u32; n];
        for (l, cyc) in cycles.iter().enumerate() {
            if img.comm[i][l].len() + 1 != cyc.len() {
                return Err(Error::Invalid("image shape != cycle structure".into()));
            }
            xi[cyc[0]] = img.base[i][l];
            for (k, &j) in cyc[1..].iter().enumerate() {
                let prev = xi[cyc[k]];
                xi[j] = s.mul(g.twists[j].apply(prev), s.inv(img.comm[i][l][k]));
            }
        }
        out.push(xi);
    }
    Ok(out)
}

/// A breadth-first order on coordinates: each later point is moved to an
/// earlier one by (a power of) the generator that discovered it.
#[derive(Clone, Debug)]
pub struct SchreierOrder {
    /// traversal sequence; order[0] is the base point
    pub order: Vec<usize>,
    /// pos[j] = rank of point j in the traversal
    pub pos: Vec<usize>,
    /// for each point except the base: index of the discovering generator
    pub gen_of: Vec<Option<usize>>,
}

pub fn schreier_order(gens: &[MonomialAuto], base: usize) -> Result<SchreierOrder> {
    if gens.is_empty() {
        return Err(Error::Invalid("no generators".into()));
    }
    let n = gens[0].n_points();
    let mut order = vec![base];
    let mut pos = vec![usize::MAX; n];
    pos[base] = 0;
    let mut gen_of = vec![None; n];
    let mut head = 0;
    while head < order.len() {
        let j = order[head];
        head += 1;
        for (i, g) in gens.iter().enumerate() {
            for k in [g.point_map[j], g.point_inv[j]] {
                if pos[k] == usize::MAX {
                    pos[k] = order.len();
                    order.push(k);
                    gen_of[k] = Some(i);
                }
            }
        }
    }
    if order.len() != n {
        return Err(Error::NotTransitive);
    }
    Ok(SchreierOrder { order, pos, gen_of })
}

/// Image of a tuple under Ψ: cycle-leading coordinates of each xᵢ, the
/// commutator coordinates at the remaining points except one designated slot
/// per non-base point, and the coordinates 2..n of the full product
/// ∏ᵢ[xᵢ,gᵢ].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiImage {
    pub base: Vec<Vec<u32>>,
    /// per generator, per cycle: walk entries with the designated slots
    /// (the discovering generator at each point) left out
    pub rest: Vec<Vec<Vec<u32>>>,
    /// ∏ᵢ[xᵢ,gᵢ] at the points of traversal rank 1..n−1
    pub phis: Vec<u32>,
}

pub fn psi_map<G: GroupOps>(
    s: &G,
    gens: &[MonomialAuto],
    ord: &SchreierOrder,
    x: &[Vec<u32>],
) -> Result<PsiImage> {
    let n = check_tuple_shape(gens, x)?;
    if ord.pos.len() != n {
        return Err(Error::Invalid("traversal order is for a different power".into()));
    }
    let ys: Vec<Vec<u32>> = gens.iter().zip(x).map(|(g, xi)| g.comm(s, xi)).collect();
    let mut base = Vec::with_capacity(gens.len());
    let mut rest = Vec::with_capacity(gens.len());
    for (i, (g, xi)) in gens.iter().zip(x).enumerate() {
        let mut b = Vec::new();
        let mut r = Vec::new();
        for cyc in cycles_by_order(&g.point_map, &ord.pos) {
            b.push(xi[cyc[0]]);
            r.push(
                cyc[1..]
                    .iter()
                    .filter(|&&j| ord.gen_of[j] != Some(i))
                    .map(|&j| ys[i][j])
                    .collect(),
            );
        }
        base.push(b);
        rest.push(r);
    }
    let phis = ord.order[1..]
        .iter()
        .map(|&j| ys.iter().fold(0u32, |acc, y| s.mul(acc, y[j])))
        .collect();
    Ok(PsiImage { base, rest, phis })
}

/// Invert Ψ: the designated commutator coordinates are solved from the
/// product coordinates in decreasing traversal order, after which the cycle
/// walks of Θ⁻¹ reconstruct x.
pub fn psi_inverse<G: GroupOps>(
    s: &G,
    gens: &[MonomialAuto],
    ord: &SchreierOrder,
    img: &PsiImage,
) -> Result<Vec<Vec<u32>>> {
    let m = gens.len();
    if img.base.len() != m || img.rest.len() != m {
        return Err(Error::Invalid("image shape != generator count".into()));
    }
    let n = gens[0].n_points();
    if img.phis.len() + 1 != n {
        return Err(Error::Invalid("product coordinate count != points − 1".into()));
    }
    let cycles: Vec<Vec<Vec<usize>>> = gens
        .iter()
        .map(|g| cycles_by_order(&g.point_map, &ord.pos))
        .collect();

    // scatter the known commutator coordinates; designated slots stay None
    let mut y: Vec<Vec<Option<u32>>> = vec![vec![None; n]; m];
    for i in 0..m {
        if img.rest[i].len() != cycles[i].len() {
            return Err(Error::Invalid("image shape != cycle structure".into()));
        }
        for (l, cyc) in cycles[i].iter().enumerate() {
            let mut vals = img.rest[i][l].iter();
            for &j in &cyc[1..] {
                if ord.gen_of[j] != Some(i) {
                    y[i][j] = Some(
                        *vals
                            .next()
                            .ok_or_else(|| Error::Invalid("image shape != cycle structure".into()))?,
                    );
                }
            }
            if vals.next().is_some() {
                return Err(Error::Invalid("image shape != cycle structure".into()));
            }
        }
    }

    // y_i at a cycle-leading point is determined by the leading x-coordinate
    // and the later commutator coordinates on the same cycle
    let lead_value = |i: usize, l: usize, y: &[Vec<Option<u32>>]| -> Result<u32> {
        let cyc = &cycles[i][l];
        let g = &gens[i];
        let mut cur = img.base[i][l];
        for &j in &cyc[1..] {
            let yv = y[i][j].ok_or_else(|| {
                Error::Invalid("unresolved commutator coordinate in back-substitution".into())
            })?;
            cur = s.mul(g.twists[j].apply(cur), s.inv(yv));
        }
        let last = cur;
        let delta = cyc[0];
        Ok(s.mul(s.inv(img.base[i][l]), g.twists[delta].apply(last)))
    };

    for p in (1..n).rev() {
        let j = ord.order[p];
        let ij = ord.gen_of[j].ok_or(Error::NotTransitive)?;
        // fill every other generator's coordinate at j
        for i in 0..m {
            if i == ij || y[i][j].is_some() {
                continue;
            }
            let l = cycles[i]
                .iter()
                .position(|cyc| cyc[0] == j)
                .ok_or_else(|| Error::Invalid("point is neither leading nor known".into()))?;
            y[i][j] = Some(lead_value(i, l, &y)?);
        }
        let mut before = 0u32;
        for yi in y.iter().take(ij) {
            before = s.mul(before, yi[j].unwrap());
        }
        let mut after = 0u32;
        for yi in y.iter().skip(ij + 1) {
            after = s.mul(after, yi[j].unwrap());
        }
        y[ij][j] = Some(s.mul(s.mul(s.inv(before), img.phis[p - 1]), s.inv(after)));
    }

    // all walk coordinates are now known; run the cycle walks
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let g = &gens[i];
        let mut xi = vec![0u32; n];
        for (l, cyc) in cycles[i].iter().enumerate() {
            xi[cyc[0]] = img.base[i][l];
            for (k, &j) in cyc[1..].iter().enumerate() {
                let prev = xi[cyc[k]];
                let yv = y[i][j].unwrap();
                xi[j] = s.mul(g.twists[j].apply(prev), s.inv(yv));
            }
        }
        out.push(xi);
    }
    Ok(out)
}

fn ensure_quasisimple(t: &Arc<GroupTable>) -> Result<()> {
    let whole = Subgrp::whole(&**t);
    if derived(&**t, &whole).order() != t.order() {
        return Err(Error::Hypothesis("group is not perfect".into()));
    }
    let z = closure(&**t, &t.center());
    let (q, _) = quotient(&**t, &z, t.order())?;
    for class in q.classes().classes.iter().skip(1) {
        if !normal_closure(&q, &[class[0]]).is_whole() {
            return Err(Error::Hypothesis(
                "central quotient is not simple".into(),
            ));
        }
    }
    Ok(())
}

/// Coverage of a group by prefix products of twisted-commutator image sets.
#[derive(Clone, Debug, Serialize)]
pub struct CoverageTReport {
    pub pair_count: usize,
    /// prefix product sizes (distinct elements hit, for the sampled path)
    pub layer_sizes: Vec<usize>,
    /// least prefix length whose product is the whole group
    pub d_prime: Option<usize>,
    pub exact: bool,
    /// (distinct elements of the full prefix, probes) when sampling
    pub sampled: Option<(u64, u64)>,
}

/// For each prefix of the automorphism pairs, measure the product of image
/// sets T_{αᵢ,βᵢ}(S,S). Exact for |S| ≤ 10⁴, otherwise sampled with the
/// given probe count. The group is required to be quasisimple (perfect with
/// simple central quotient).
pub fn coverage_t(
    t: &Arc<GroupTable>,
    pairs: &[(Automorphism, Automorphism)],
    samples: u64,
    seed: u64,
) -> Result<CoverageTReport> {
    if pairs.is_empty() {
        return Err(Error::Invalid("no automorphism pairs".into()));
    }
    ensure_quasisimple(t)?;
    let n = t.order();
    if n <= 10_000 {
        let mut layers = Vec::new();
        let mut cur: Option<ElementSet> = None;
        let mut d_prime = None;
        for (d, (a, b)) in pairs.iter().enumerate() {
            let mut img = ElementSet::empty(n);
            'img: for x in 0..n as u32 {
                for y in 0..n as u32 {
                    img.insert(t_value(&**t, a, b, x, y));
                    if img.len() == n {
                        break 'img;
                    }
                }
            }
            let next = match cur {
                None => img,
                Some(prev) => set_product(&**t, &prev, &img)?,
            };
            layers.push(next.len());
            if next.len() == n {
                d_prime = Some(d + 1);
                break;
            }
            cur = Some(next);
        }
        Ok(CoverageTReport {
            pair_count: pairs.len(),
            layer_sizes: layers,
            d_prime,
            exact: true,
            sampled: None,
        })
    } else {
        use rand::Rng;
        let mut rng = crate::rng::substream(seed, "coverage-t", 0);
        let mut hits: Vec<ElementSet> = (0..pairs.len()).map(|_| ElementSet::empty(n)).collect();
        for _ in 0..samples {
            let mut acc = 0u32;
            for (d, (a, b)) in pairs.iter().enumerate() {
                let x = rng.gen_range(0..n as u32);
                let y = rng.gen_range(0..n as u32);
                acc = t.mul(acc, t_value(&**t, a, b, x, y));
                hits[d].insert(acc);
            }
        }
        let layers: Vec<usize> = hits.iter().map(|h| h.len()).collect();
        let d_prime = layers.iter().position(|&l| l == n).map(|d| d + 1);
        Ok(CoverageTReport {
            pair_count: pairs.len(),
            layer_sizes: layers.clone(),
            d_prime,
            exact: false,
            sampled: Some((*layers.last().unwrap() as u64, samples)),
        })
    }
}

/// Hypothesis checks and coverage for products ∏ᵢ∏ⱼ [N, y_{ij}] on a direct
/// power N = S^n acted on by tuples of monomial automorphisms.
#[derive(Clone, Debug, Serialize)]
pub struct Comm20Report {
    pub n_factors: usize,
    pub tuple_len: usize,
    pub quasisimple_base: bool,
    pub at_least_three_factors: bool,
    pub transitive_ok: bool,
    /// per tuple: how many entries move at least η·n coordinates
    pub moving_counts: Vec<usize>,
    pub k_eta_ok: bool,
    pub w_fraction: f64,
    pub w_threshold_ok: bool,
    pub hypotheses_ok: bool,
    /// prefix product sizes after each (i, j) step (exact path)
    pub layer_sizes: Option<Vec<usize>>,
    /// step count at which the product first equals N
    pub reached_at: Option<usize>,
    pub exact: bool,
    /// (distinct products hit, probes) for the sampled path
    pub sampled: Option<(u64, u64)>,
}

fn encode(coords: &[u32], s_order: usize) -> usize {
    coords
        .iter()
        .rev()
        .fold(0usize, |acc, &c| acc * s_order + c as usize)
}

fn decode(mut idx: usize, s_order: usize, n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push((idx % s_order) as u32);
        idx /= s_order;
    }
    out
}

/// Check the product-decomposition hypotheses for the tuples `ys` (each an
/// m-tuple of monomial automorphisms of S^n) and measure how many commutator
/// image-set factors ∏ⱼ[N, y_{ij}] are needed to cover N. The subset
/// fraction `w_fraction` is compared against 1 − ε/6; below the threshold
/// only the hypothesis report is produced. Coverage itself is computed for
/// full tuple sets: exact layered products when |N| ≤ 10⁴, otherwise random
/// probes.
#[allow(clippy::too_many_arguments)]
pub fn comm20_coverage(
    s: &Arc<GroupTable>,
    n: usize,
    ys: &[Vec<MonomialAuto>],
    w_fraction: f64,
    d_param: usize,
    eta: f64,
    epsilon: f64,
    probes: u64,
    seed: u64,
) -> Result<Comm20Report> {
    if ys.is_empty() || ys[0].is_empty() {
        return Err(Error::Invalid("no automorphism tuples".into()));
    }
    let m = ys[0].len();
    for tuple in ys {
        if tuple.len() != m {
            return Err(Error::Invalid("tuples have unequal lengths".into()));
        }
        for a in tuple {
            if a.n_points() != n {
                return Err(Error::Invalid("automorphism acts on wrong power".into()));
            }
            for tw in &a.twists {
                if tw.img.len() != s.order() {
                    return Err(Error::Invalid("twist is over the wrong group".into()));
                }
            }
        }
    }

    let quasisimple_base = ensure_quasisimple(s).is_ok();
    let at_least_three = n >= 3;
    let transitive_ok = ys.iter().all(|tuple| points_transitive(tuple));
    let moving_counts: Vec<usize> = ys
        .iter()
        .map(|tuple| {
            tuple
                .iter()
                .filter(|a| a.moved_points() as f64 + 1e-9 >= eta * n as f64)
                .count()
        })
        .collect();
    let k_eta_ok = moving_counts
        .iter()
        .all(|&k| k as f64 * eta + 1e-9 >= 4.0 + 2.0 * d_param as f64);
    let w_threshold_ok = w_fraction + 1e-12 >= 1.0 - epsilon / 6.0;
    let hypotheses_ok =
        quasisimple_base && at_least_three && transitive_ok && k_eta_ok && w_threshold_ok;

    let mut report = Comm20Report {
        n_factors: n,
        tuple_len: m,
        quasisimple_base,
        at_least_three_factors: at_least_three,
        transitive_ok,
        moving_counts,
        k_eta_ok,
        w_fraction,
        w_threshold_ok,
        hypotheses_ok,
        layer_sizes: None,
        reached_at: None,
        exact: false,
        sampled: None,
    };
    if !w_threshold_ok {
        return Ok(report);
    }

    let so = s.order();
    let big_n = so.checked_pow(n as u32).ok_or(Error::OrderExceedsCap {
        order: u64::MAX,
        cap: 10_000,
    })?;
    if big_n <= 10_000 {
        // exact layered products of the per-(i,j) commutator image sets
        let mut layers = Vec::new();
        let mut cur = ElementSet::singleton(big_n, 0);
        let mut reached = None;
        let mut flat_steps = 0usize;
        'outer: for tuple in ys {
            for a in tuple {
                let mut img_v = Vec::new();
                let mut img_seen = ElementSet::empty(big_n);
                for w in 0..big_n {
                    let c = encode(&a.comm(&**s, &decode(w, so, n)), so);
                    if img_seen.insert(c as u32) {
                        img_v.push(c);
                    }
                }
                let mut next = ElementSet::empty(big_n);
                'prod: for p in cur.iter() {
                    let pc = decode(p as usize, so, n);
                    for &q in &img_v {
                        let qc = decode(q, so, n);
                        let prod: Vec<u32> =
                            pc.iter().zip(&qc).map(|(&x, &y)| s.mul(x, y)).collect();
                        next.insert(encode(&prod, so) as u32);
                        if next.len() == big_n {
                            break 'prod;
                        }
                    }
                }
                // every image set contains the identity, so sizes are
                // monotone; a whole tuple with no growth means a fixed point
                flat_steps = if next.len() == cur.len() {
                    flat_steps + 1
                } else {
                    0
                };
                layers.push(next.len());
                cur = next;
                if cur.len() == big_n {
                    reached = Some(layers.len());
                    break 'outer;
                }
                if flat_steps >= m {
                    break 'outer;
                }
            }
        }
        report.layer_sizes = Some(layers);
        report.reached_at = reached;
        report.exact = true;
    } else {
        use rand::Rng;
        let mut rng = crate::rng::substream(seed, "comm20", 0);
        let mut hits = ElementSet::empty(big_n);
        for _ in 0..probes {
            let mut acc = vec![0u32; n];
            for tuple in ys {
                for a in tuple {
                    let x: Vec<u32> = (0..n).map(|_| rng.gen_range(0..so as u32)).collect();
                    let c = a.comm(&**s, &x);
                    for (av, cv) in acc.iter_mut().zip(&c) {
                        *av = s.mul(*av, *cv);
                    }
                }
            }
            hits.insert(encode(&acc, so) as u32);
            if hits.len() == big_n {
                break;
            }
        }
        if hits.len() == big_n {
            report.reached_at = Some(ys.len() * m);
        }
        report.sampled = Some((hits.len() as u64, probes));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions as cons;
    use crate::perm::Perm;
    use crate::table::GroupTable;
    use rand::Rng;
    use std::collections::HashSet;

    fn table_of(g: crate::group::Group) -> Arc<GroupTable> {
        g.table().unwrap()
    }

    fn parity(p: &Perm) -> usize {
        p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2
    }

    #[test]
    fn twisted_value_reduces_to_plain_commutator() {
        let t = table_of(cons::sym(3));
        let id = Automorphism::identity(6);
        for x in 0..6u32 {
            for y in 0..6u32 {
                assert_eq!(t_value(&*t, &id, &id, x, y), t.comm(x, y));
            }
        }
        assert_eq!(t_value(&*t, &id, &id, 0, 0), 0);
        // nontrivial automorphisms still send (e, e) to e
        let a = Automorphism::inner(&*t, 3);
        assert_eq!(t_value(&*t, &a, &a, 0, 0), 0);

        let form = TwistedForm::new(vec![(id.clone(), id.clone()), (a.clone(), id.clone())]);
        let args = [(1u32, 2u32), (3u32, 4u32)];
        let direct = t.mul(
            t_value(&*t, &id, &id, 1, 2),
            t_value(&*t, &a, &id, 3, 4),
        );
        assert_eq!(form.evaluate(&*t, &args).unwrap(), direct);
        assert!(form.evaluate(&*t, &args[..1]).is_err());
    }

    #[test]
    fn inner_pair_rewrite_matches_direct_value() {
        let s3 = table_of(cons::sym(3));
        for a in 0..6u32 {
            for b in 0..6u32 {
                for x in 0..6u32 {
                    for y in 0..6u32 {
                        let w = inn_witness(&*s3, a, b, x, y).unwrap();
                        let aa = Automorphism::inner(&*s3, a);
                        let bb = Automorphism::inner(&*s3, b);
                        assert_eq!(w.value, t_value(&*s3, &aa, &bb, x, y));
                    }
                }
            }
        }
        // the (x, y) ↦ (x̄, ȳ) map is a bijection for fixed a, b
        let (a, b) = (1u32, 4u32);
        let mut seen = HashSet::new();
        for x in 0..6u32 {
            for y in 0..6u32 {
                let w = inn_witness(&*s3, a, b, x, y).unwrap();
                assert!(seen.insert((w.x_bar, w.y_bar)));
            }
        }

        let a5 = table_of(cons::alt(5));
        let mut rng = crate::rng::substream(7, "inn", 0);
        for _ in 0..10_000 {
            let (a, b, x, y) = (
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
            );
            inn_witness(&*a5, a, b, x, y).unwrap();
        }
    }

    #[test]
    fn merges_exhaustive_on_sym3() {
        let t = table_of(cons::sym(3));
        let id = Automorphism::identity(6);
        for idx in 0..6usize.pow(4) {
            let x = [
                (idx % 6) as u32,
                (idx / 6 % 6) as u32,
                (idx / 36 % 6) as u32,
                (idx / 216) as u32,
            ];
            let w = merge_ttt(&*t, &id, &id, &id, &id, x).unwrap();
            assert_eq!(w.alpha_form.value, w.beta_form.value);
        }
        // all-identity input gives the identity on both sides
        let w = merge_ttt(&*t, &id, &id, &id, &id, [0, 0, 0, 0]).unwrap();
        assert_eq!(w.alpha_form.value, 0);

        // repeat with a mix of inner automorphisms
        let auts: Vec<Automorphism> = (0..6).map(|g| Automorphism::inner(&*t, g)).collect();
        for idx in 0..6usize.pow(4) {
            let x = [
                (idx % 6) as u32,
                (idx / 6 % 6) as u32,
                (idx / 36 % 6) as u32,
                (idx / 216) as u32,
            ];
            merge_ttt(&*t, &auts[1], &auts[3], &auts[2], &auts[5], x).unwrap();
        }
    }

    #[test]
    fn merges_hold_on_random_alt5_tuples() {
        let t = table_of(cons::alt(5));
        let outer =
            Automorphism::from_normalizing_perm(&t, &Perm::from_cycles("(1 2)", 5).unwrap())
                .unwrap();
        let mut rng = crate::rng::substream(11, "merge", 0);
        let mut outputs = HashSet::new();
        let mut inputs = HashSet::new();
        for _ in 0..10_000 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                let inner = Automorphism::inner(&*t, rng.gen_range(0..60u32));
                if rng.gen_range(0..2) == 0 {
                    inner
                } else {
                    inner.compose(&outer)
                }
            };
            let (a1, b1, a2, b2) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let x = [
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
            ];
            let w = merge_ttt(&*t, &a1, &b1, &a2, &b2, x).unwrap();
            assert_eq!(w.alpha_form.value, w.beta_form.value);
            outputs.insert(w.alpha_form.output);
            inputs.insert(x);
        }
        // merge_ttt verified the inverse map on every call, so distinct
        // inputs under the same automorphisms must give distinct outputs
        let fixed_a = Automorphism::inner(&*t, 7);
        let fixed_b = Automorphism::inner(&*t, 23).compose(&outer);
        let mut seen_in = HashSet::new();
        let mut seen_out = HashSet::new();
        for _ in 0..3_000 {
            let x = [
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
            ];
            let w = merge_ttt(&*t, &fixed_a, &fixed_b, &fixed_b, &fixed_a, x).unwrap();
            if seen_in.insert(x) {
                assert!(seen_out.insert(w.beta_form.output));
            }
        }
    }

    #[test]
    fn conjugation_shift_exhaustive_on_sym3() {
        let t = table_of(cons::sym(3));
        for ga in 0..6u32 {
            for gb in 0..6u32 {
                let alpha = Automorphism::inner(&*t, ga);
                let beta = Automorphism::inner(&*t, gb);
                for z in 0..6u32 {
                    for x in 0..6u32 {
                        for y in 0..6u32 {
                            let w = shift_tconj(&*t, z, &alpha, &beta, x, y).unwrap();
                            if z == 0 {
                                assert_eq!((w.x_new, w.y_new, w.residue), (x, y, 0));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_shift_with_outer_automorphism() {
        let t = table_of(cons::alt(5));
        let outer =
            Automorphism::from_normalizing_perm(&t, &Perm::from_cycles("(4 5)", 5).unwrap())
                .unwrap();
        let mut rng = crate::rng::substream(13, "shift", 0);
        for _ in 0..10_000 {
            let alpha = Automorphism::inner(&*t, rng.gen_range(0..60u32)).compose(&outer);
            let beta = Automorphism::inner(&*t, rng.gen_range(0..60u32));
            let (z, x, y) = (
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
                rng.gen_range(0..60u32),
            );
            let w = shift_tconj(&*t, z, &alpha, &beta, x, y).unwrap();
            // the residue exponent is [α⁻¹, β], inner when both parts are
            let composed_back = w.gamma.apply(z);
            assert_eq!(composed_back, w.residue);
        }
    }

    #[test]
    fn index2_reduction_exhaustive_when_all_inside() {
        let t = table_of(cons::sym(3));
        let always = |_: &Automorphism| true;
        let pairs = [
            (Automorphism::inner(&*t, 1), Automorphism::inner(&*t, 2)),
            (Automorphism::inner(&*t, 3), Automorphism::inner(&*t, 4)),
            (Automorphism::inner(&*t, 5), Automorphism::inner(&*t, 0)),
            (Automorphism::inner(&*t, 2), Automorphism::inner(&*t, 1)),
        ];
        for idx in 0..6usize.pow(8) {
            let mut v = idx;
            let mut x = [0u32; 8];
            for slot in &mut x {
                *slot = (v % 6) as u32;
                v /= 6;
            }
            let w = reduce_index2(&*t, &pairs, &always, x).unwrap();
            assert_eq!(w.alpha_branches, (MergeBranch::First, MergeBranch::First));
            assert_eq!(w.beta_branch, MergeBranch::First);
            let back = reduce_index2_invert(&*t, &pairs, &always, w.x_star, w.x_tilde).unwrap();
            assert_eq!(back, x);
        }
        // all-identity coordinates: the middle factor is trivial and the
        // value collapses to the product of the two side maps
        let w = reduce_index2(&*t, &pairs, &always, [0; 8]).unwrap();
        assert_eq!(
            w.value,
            t.mul(
                t.mul(w.left, t_value(&*t, &w.gamma, &w.delta, w.x_star.0, w.x_star.1)),
                w.right
            )
        );
    }

    #[test]
    fn index2_reduction_branches_on_sym3() {
        // Δ = conjugations by even permutations, an index-2 subgroup of the
        // inner automorphism group of Sym(3)
        let t = table_of(cons::sym(3));
        let tt = t.clone();
        let even = move |a: &Automorphism| {
            let c = inner_conjugator(&*tt, a).expect("inner by construction");
            parity(tt.perm(c).unwrap()) == 0
        };
        let mut rng = crate::rng::substream(17, "idx2", 0);
        let odd_elts: Vec<u32> = (0..6u32)
            .filter(|&g| parity(t.perm(g).unwrap()) == 1)
            .collect();
        let even_elts: Vec<u32> = (0..6u32)
            .filter(|&g| parity(t.perm(g).unwrap()) == 0)
            .collect();
        let mut seen_branches = HashSet::new();
        for trial in 0..2_000 {
            // drive every branch combination by controlling parities
            let pick = |rng: &mut rand_chacha::ChaCha8Rng, odd: bool| {
                let pool = if odd { &odd_elts } else { &even_elts };
                Automorphism::inner(&*t, pool[rng.gen_range(0..pool.len())])
            };
            let flags = trial % 16;
            let pairs = [
                (
                    pick(&mut rng, flags & 1 != 0),
                    pick(&mut rng, flags & 4 != 0),
                ),
                (
                    pick(&mut rng, flags & 2 != 0),
                    pick(&mut rng, flags & 8 != 0),
                ),
                (
                    pick(&mut rng, (flags & 1 != 0) ^ (trial % 32 >= 16)),
                    pick(&mut rng, flags & 8 == 0),
                ),
                (
                    pick(&mut rng, flags & 2 == 0),
                    pick(&mut rng, flags & 4 == 0),
                ),
            ];
            let x: [u32; 8] = {
                let mut out = [0u32; 8];
                for slot in &mut out {
                    *slot = rng.gen_range(0..6u32);
                }
                out
            };
            let w = reduce_index2(&*t, &pairs, &even, x).unwrap();
            seen_branches.insert((w.alpha_branches, w.beta_branch));
            let back = reduce_index2_invert(&*t, &pairs, &even, w.x_star, w.x_tilde).unwrap();
            assert_eq!(back, x);
        }
        // the parity schedule above exercises merged and unmerged branches
        // on both levels
        assert!(seen_branches
            .iter()
            .any(|(ab, _)| ab.0 == MergeBranch::Product || ab.1 == MergeBranch::Product));
        assert!(seen_branches.iter().any(|(_, b)| *b == MergeBranch::Product));
        assert!(seen_branches.len() >= 8, "got {}", seen_branches.len());
    }

    #[test]
    fn index2_reduction_on_alt6_with_outer_involution() {
        let t = table_of(cons::alt(6));
        let outer =
            Automorphism::from_normalizing_perm(&t, &Perm::from_cycles("(5 6)", 6).unwrap())
                .unwrap();
        let tt = t.clone();
        let is_inner = move |a: &Automorphism| inner_conjugator(&*tt, a).is_some();
        let mut rng = crate::rng::substream(19, "idx2-a6", 0);
        for _ in 0..10_000 {
            let mut pick = || {
                let inner = Automorphism::inner(&*t, rng.gen_range(0..360u32));
                if rng.gen_range(0..2) == 0 {
                    inner.compose(&outer)
                } else {
                    inner
                }
            };
            let pairs = [
                (pick(), pick()),
                (pick(), pick()),
                (pick(), pick()),
                (pick(), pick()),
            ];
            let x: [u32; 8] = {
                let mut out = [0u32; 8];
                for slot in &mut out {
                    *slot = rng.gen_range(0..360u32);
                }
                out
            };
            let w = reduce_index2(&*t, &pairs, &is_inner, x).unwrap();
            let back = reduce_index2_invert(&*t, &pairs, &is_inner, w.x_star, w.x_tilde).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn tuple_commutator_difference_identity() {
        let groups = [table_of(cons::sym(4)), table_of(cons::alt(5))];
        for (gi, t) in groups.iter().enumerate() {
            let n = t.order() as u32;
            let mut rng = crate::rng::substream(23, "uv", gi as u64);
            for trial in 0..100 {
                let m = 1 + trial % 4;
                let s = 1 + trial % 3;
                let gs: Vec<u32> = (0..m).map(|_| rng.gen_range(0..n)).collect();
                let mk = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<u32>> {
                    (0..s)
                        .map(|_| (0..m).map(|_| rng.gen_range(0..n)).collect())
                        .collect()
                };
                let a_tuples = mk(&mut rng);
                let u_tuples = mk(&mut rng);
                assert!(uv_identity_holds(&**t, &gs, &a_tuples, &u_tuples));
            }
        }
    }

    #[test]
    fn conjugate_generator_closures_agree() {
        let s3 = table_of(cons::sym(3));
        for g1 in 0..6u32 {
            for g2 in 0..6u32 {
                for u1 in 0..6u32 {
                    for u2 in 0..6u32 {
                        assert!(newgens_holds(&*s3, &[g1, g2], &[u1, u2]));
                    }
                }
            }
        }
        let a5 = table_of(cons::alt(5));
        let mut rng = crate::rng::substream(29, "newgens", 0);
        for _ in 0..50 {
            let gs: Vec<u32> = (0..3).map(|_| rng.gen_range(0..60u32)).collect();
            let us: Vec<u32> = (0..3).map(|_| rng.gen_range(0..60u32)).collect();
            assert!(newgens_holds(&*a5, &gs, &us));
        }
    }

    #[test]
    fn theta_round_trip_degenerate() {
        let c2 = table_of(cons::cyclic(2));
        // identity point action: every cycle is a singleton, so Θ is the
        // base coordinates alone and the commutator part is empty
        for m in [1usize, 2] {
            let gens: Vec<MonomialAuto> = (0..m)
                .map(|_| MonomialAuto::permutation(2, vec![0, 1]).unwrap())
                .collect();
            let total = 4usize.pow(m as u32);
            let mut images = HashSet::new();
            for idx in 0..total {
                let x: Vec<Vec<u32>> = (0..m)
                    .map(|i| vec![(idx >> (2 * i)) as u32 & 1, (idx >> (2 * i + 1)) as u32 & 1])
                    .collect();
                let img = theta_map(&*c2, &gens, &x).unwrap();
                assert!(img.comm.iter().all(|c| c.iter().all(|w| w.is_empty())));
                assert_eq!(theta_inverse(&*c2, &gens, &img).unwrap(), x);
                images.insert(format!("{:?}", img));
            }
            // bijective: as many distinct images as inputs
            assert_eq!(images.len(), total);
        }
        // identity input has an all-identity commutator part
        let gens = vec![MonomialAuto::permutation(2, vec![1, 0]).unwrap()];
        let img = theta_map(&*c2, &gens, &[vec![0, 0]]).unwrap();
        assert!(img.comm[0].iter().flatten().all(|&v| v == 0));
    }

    #[test]
    fn theta_round_trip_on_sym3_cycle() {
        let t = table_of(cons::sym(3));
        let tw = |g: u32| Automorphism::inner(&*t, g);
        let g1 = MonomialAuto::new(vec![1, 2, 0], vec![tw(1), Automorphism::identity(6), tw(4)])
            .unwrap();
        let g2 =
            MonomialAuto::new(vec![0, 1, 2], vec![tw(3), tw(2), Automorphism::identity(6)])
                .unwrap();
        let gens = [g1, g2];
        let mut rng = crate::rng::substream(31, "theta", 0);
        for _ in 0..10_000 {
            let x: Vec<Vec<u32>> = (0..2)
                .map(|_| (0..3).map(|_| rng.gen_range(0..6u32)).collect())
                .collect();
            let img = theta_map(&*t, &gens, &x).unwrap();
            assert_eq!(theta_inverse(&*t, &gens, &img).unwrap(), x);
        }
    }

    #[test]
    fn psi_round_trip_exhaustive_c2() {
        let c2 = table_of(cons::cyclic(2));
        let id2 = || Automorphism::identity(2);
        // n = 2 with a swap and an identity generator; then m = 4 so the
        // full domain has 256 tuples
        for m in [2usize, 4] {
            let mut gens = vec![MonomialAuto::new(vec![1, 0], vec![id2(), id2()]).unwrap()];
            for _ in 1..m {
                gens.push(MonomialAuto::permutation(2, vec![0, 1]).unwrap());
            }
            let ord = schreier_order(&gens, 0).unwrap();
            let total = 4usize.pow(m as u32);
            let mut images = HashSet::new();
            for idx in 0..total {
                let x: Vec<Vec<u32>> = (0..m)
                    .map(|i| vec![(idx >> (2 * i)) as u32 & 1, (idx >> (2 * i + 1)) as u32 & 1])
                    .collect();
                let img = psi_map(&*c2, &gens, &ord, &x).unwrap();
                assert_eq!(psi_inverse(&*c2, &gens, &ord, &img).unwrap(), x);
                images.insert(format!("{:?}", img));
            }
            assert_eq!(images.len(), total, "psi not bijective for m = {}", m);
        }
        // all-identity input maps to all-identity coordinates
        let gens = vec![
            MonomialAuto::new(vec![1, 0], vec![id2(), id2()]).unwrap(),
            MonomialAuto::permutation(2, vec![0, 1]).unwrap(),
        ];
        let ord = schreier_order(&gens, 0).unwrap();
        let img = psi_map(&*c2, &gens, &ord, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(img.base.iter().flatten().all(|&v| v == 0));
        assert!(img.rest.iter().flatten().flatten().all(|&v| v == 0));
        assert!(img.phis.iter().all(|&v| v == 0));
    }

    #[test]
    fn psi_round_trip_alt5_rotation() {
        let t = table_of(cons::alt(5));
        let tw = |g: u32| Automorphism::inner(&*t, g);
        let gens = [
            MonomialAuto::new(vec![1, 2, 0], vec![tw(7), Automorphism::identity(60), tw(30)])
                .unwrap(),
            MonomialAuto::new(vec![2, 0, 1], vec![Automorphism::identity(60), tw(11), tw(3)])
                .unwrap(),
        ];
        let ord = schreier_order(&gens, 0).unwrap();
        let mut rng = crate::rng::substream(37, "psi", 0);
        for _ in 0..1_000 {
            let x: Vec<Vec<u32>> = (0..2)
                .map(|_| (0..3).map(|_| rng.gen_range(0..60u32)).collect())
                .collect();
            let img = psi_map(&*t, &gens, &ord, &x).unwrap();
            assert_eq!(psi_inverse(&*t, &gens, &ord, &img).unwrap(), x);
        }
        // intransitive point action is rejected up front
        let stuck = [MonomialAuto::permutation(60, vec![0, 1, 2]).unwrap()];
        assert!(matches!(
            schreier_order(&stuck, 0),
            Err(Error::NotTransitive)
        ));
    }

    #[test]
    fn coverage_reaches_group_for_inner_pairs() {
        let t = table_of(cons::alt(5));
        let pairs = vec![(Automorphism::inner(&*t, 9), Automorphism::inner(&*t, 44))];
        let rep = coverage_t(&t, &pairs, 0, 0).unwrap();
        assert!(rep.exact);
        assert_eq!(rep.d_prime, Some(1));
        assert_eq!(rep.layer_sizes[0], 60);

        // a non-quasisimple group is refused
        let c2 = table_of(cons::cyclic(2));
        let id = Automorphism::identity(2);
        assert!(coverage_t(&c2, &[(id.clone(), id)], 0, 0).is_err());
    }

    #[test]
    fn coverage_on_psl27_with_mixed_pairs() {
        let t = table_of(cons::psl2(7).unwrap());
        // conjugation by the projective map x ↦ 3x: determinant 3 is not a
        // square mod 7, so this normalizes without being inner
        let mut img: Vec<u32> = (0..8).collect();
        for x in 0..7u32 {
            img[x as usize] = (3 * x) % 7;
        }
        let diag = Automorphism::from_normalizing_perm(&t, &Perm::from_images(img).unwrap())
            .unwrap();
        assert!(inner_conjugator(&*t, &diag).is_none());
        let pairs = vec![
            (Automorphism::inner(&*t, 12), diag.clone()),
            (diag.clone(), Automorphism::inner(&*t, 101)),
        ];
        let rep = coverage_t(&t, &pairs, 0, 0).unwrap();
        assert!(rep.exact);
        assert_eq!(rep.d_prime, Some(1));
    }

    #[test]
    fn comm20_exact_on_double_alt5() {
        let s = table_of(cons::alt(5));
        let mut rng = crate::rng::substream(41, "comm20", 0);
        // twelve coordinate swaps with assorted twists: every entry moves
        // both points, so k = 12 and η = 1, meeting k·η ≥ 4 + 2D for D = 4
        let ys: Vec<Vec<MonomialAuto>> = (0..10)
            .map(|_| {
                (0..12)
                    .map(|_| {
                        MonomialAuto::new(
                            vec![1, 0],
                            vec![
                                Automorphism::inner(&*s, rng.gen_range(0..60u32)),
                                Automorphism::inner(&*s, rng.gen_range(0..60u32)),
                            ],
                        )
                        .unwrap()
                    })
                    .collect()
            })
            .collect();
        let rep = comm20_coverage(&s, 2, &ys, 1.0, 4, 1.0, 0.125, 0, 0).unwrap();
        assert!(rep.exact);
        assert!(rep.transitive_ok && rep.k_eta_ok && rep.w_threshold_ok);
        assert!(!rep.at_least_three_factors); // only two factors here
        assert_eq!(rep.reached_at, Some(3));
        assert_eq!(rep.layer_sizes.as_ref().unwrap().last(), Some(&3600));
    }

    #[test]
    fn comm20_threshold_guard() {
        let s = table_of(cons::alt(5));
        let ys = vec![vec![
            MonomialAuto::permutation(60, vec![1, 0]).unwrap();
            2
        ]];
        // 0.9 < 1 − ε/6 ≈ 0.979: hypothesis fails and no coverage is run
        let rep = comm20_coverage(&s, 2, &ys, 0.9, 4, 1.0, 0.125, 0, 0).unwrap();
        assert!(!rep.w_threshold_ok && !rep.hypotheses_ok);
        assert!(rep.layer_sizes.is_none() && rep.sampled.is_none());
    }

    #[test]
    fn comm20_sampled_on_triple_alt5() {
        let s = table_of(cons::alt(5));
        let mut rng = crate::rng::substream(43, "comm20-3", 0);
        let mut rot = |shift: usize| {
            let pm = match shift {
                1 => vec![1, 2, 0],
                _ => vec![2, 0, 1],
            };
            MonomialAuto::new(
                pm,
                (0..3)
                    .map(|_| Automorphism::inner(&*s, rng.gen_range(0..60u32)))
                    .collect(),
            )
            .unwrap()
        };
        let ys: Vec<Vec<MonomialAuto>> = (0..10).map(|i| vec![rot(1 + i % 2), rot(2 - i % 2)]).collect();
        // 2.5 million probes: reaching 99.9% of 216 000 products needs about
        // |N|·ln(1000) ≈ 1.5 million draws even at perfect uniformity
        let rep = comm20_coverage(&s, 3, &ys, 1.0, 4, 1.0, 0.125, 2_500_000, 5).unwrap();
        assert!(!rep.exact);
        let (hits, _) = rep.sampled.unwrap();
        assert!(
            hits as f64 >= 0.999 * 216_000.0,
            "sampled coverage too small: {}",
            hits
        );
        assert!(rep.transitive_ok);
    }
}
