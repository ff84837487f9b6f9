//! Twisted-commutator identity suite. Every rewriting identity (merge of
//! two factors, conjugation shift, inner-pair collapse, four-factor
//! reduction into an index-2 subgroup, the a·u difference expansion and the
//! new-generator equality) is checked exhaustively on Sym(3) and the
//! dihedral group of order 8, then with random inputs on Alt(5), Alt(6) and
//! PSL(2,7) where outer automorphisms are available. On top of that sit the
//! Θ/Ψ coordinate bijections, twisted-commutator coverage of quasisimple
//! groups, and coverage of direct powers of Alt(5) under monomial tuples.
//! A failed identity is always critical: these are equalities, not
//! estimates.

use std::sync::Arc;

use groupbench_core::autos::Automorphism;
use groupbench_core::subgroup::{self, Subgrp};
use groupbench_core::table::{GroupOps, GroupTable};
use groupbench_core::twisted::{
    comm20_coverage, coverage_t, inn_witness, inner_conjugator, merge_ttt, newgens_holds,
    psi_inverse, psi_map, reduce_index2, reduce_index2_invert, schreier_order, shift_tconj,
    t_value, theta_inverse, theta_map, uv_identity_holds, MonomialAuto,
};
use groupbench_core::width::{
    auto_comm_cover, auto_comm_identity_check, auto_comm_set_inclusion, comm_factorization_check,
};
use groupbench_core::{chief, rng, Perm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::catalog::CatalogEntry;
use crate::config::RunConfig;
use crate::report::{detail, ItemReport};

fn table_of(cat: &[CatalogEntry], name: &str) -> Option<Arc<GroupTable>> {
    cat.iter().find(|e| e.name == name)?.group.table().ok()
}

/// Identity plus two inner automorphisms: one by an involution, one by an
/// element of maximal order. Nine (α,β) pairs over this pool exercise every
/// mixed case of the rewriting identities.
fn small_pool(t: &GroupTable) -> Vec<Automorphism> {
    let n = t.order() as u32;
    let mut pool = vec![Automorphism::identity(t.order())];
    if let Some(x) = (1..n).find(|&x| t.elem_order(x) == 2) {
        pool.push(Automorphism::inner(t, x));
    }
    if let Some(x) = (1..n).max_by_key(|&x| t.elem_order(x)) {
        pool.push(Automorphism::inner(t, x));
    }
    pool
}

/// An outer automorphism for the larger groups, realized as conjugation by
/// a normalizing permutation: an odd point swap for the alternating groups,
/// and the projective image of x ↦ 3x (a non-square determinant) for
/// PSL(2,7).
fn outer_auto(name: &str, t: &GroupTable) -> Option<Automorphism> {
    let p = match name {
        "alt5" => Perm::from_images(vec![1, 0, 2, 3, 4]).ok()?,
        "alt6" => Perm::from_images(vec![0, 1, 2, 3, 5, 4]).ok()?,
        "psl2_7" => Perm::from_images(vec![0, 3, 6, 2, 5, 1, 4, 7]).ok()?,
        _ => return None,
    };
    let a = Automorphism::from_normalizing_perm(t, &p).ok()?;
    // only useful if it is genuinely outer
    inner_conjugator(t, &a).is_none().then_some(a)
}

fn random_auto(
    t: &GroupTable,
    outer: Option<&Automorphism>,
    rng: &mut ChaCha8Rng,
) -> Automorphism {
    let inner = Automorphism::inner(t, rng.gen_range(0..t.order() as u32));
    match outer {
        Some(o) if rng.gen_bool(0.5) => o.compose(&inner),
        _ => inner,
    }
}

// ---------------------------------------------------------------- merge --

fn merge_exhaustive(cat: &[CatalogEntry], gname: &str) -> ItemReport {
    let name = format!("{gname}/merge");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let pool = small_pool(&t);
    let n = t.order() as u32;
    let mut combos: Vec<[&Automorphism; 4]> = Vec::new();
    for a1 in &pool {
        for b1 in &pool {
            for a2 in &pool {
                for b2 in &pool {
                    combos.push([a1, b1, a2, b2]);
                }
            }
        }
    }
    let total: u64 = combos
        .par_iter()
        .map(|[a1, b1, a2, b2]| {
            let mut cnt = 0u64;
            for x1 in 0..n {
                for x2 in 0..n {
                    for x3 in 0..n {
                        for x4 in 0..n {
                            if merge_ttt(&*t, a1, b1, a2, b2, [x1, x2, x3, x4]).is_ok() {
                                cnt += 1;
                            }
                        }
                    }
                }
            }
            cnt
        })
        .sum();
    let expected = combos.len() as u64 * (n as u64).pow(4);
    ItemReport::new(
        &name,
        true,
        total == expected,
        json!({ "pool": pool.len(), "tuples": expected, "verified": total }),
    )
    .critical_if(total != expected)
}

fn merge_random(cat: &[CatalogEntry], gname: &str, cfg: &RunConfig) -> ItemReport {
    let name = format!("{gname}/merge");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let outer = outer_auto(gname, &t);
    let n = t.order() as u32;
    let mut rng = rng::substream(cfg.seed, &format!("twisted:merge:{gname}"), 0);
    let mut outer_used = 0u64;
    for _ in 0..cfg.samples {
        let aut: Vec<Automorphism> = (0..4).map(|_| random_auto(&t, outer.as_ref(), &mut rng)).collect();
        outer_used += aut
            .iter()
            .filter(|a| inner_conjugator(&*t, a).is_none())
            .count() as u64;
        let x = [(); 4].map(|_| rng.gen_range(0..n));
        if let Err(err) = merge_ttt(&*t, &aut[0], &aut[1], &aut[2], &aut[3], x) {
            return ItemReport::failed(&name, err).critical_if(true);
        }
    }
    ItemReport::new(
        &name,
        false,
        true,
        json!({ "samples": cfg.samples, "outer_factors": outer_used, "has_outer": outer.is_some() }),
    )
}

// ---------------------------------------------------------------- shift --

fn shift_check(t: &GroupTable, z: u32, a: &Automorphism, b: &Automorphism, x: u32, y: u32) -> bool {
    match shift_tconj(t, z, a, b, x, y) {
        Ok(w) => {
            w.value == t.mul(z, t_value(t, a, b, x, y))
                && t.mul(t_value(t, a, b, w.x_new, w.y_new), w.residue) == w.value
                && w.residue == w.gamma.apply(z)
        }
        Err(_) => false,
    }
}

fn shift_exhaustive(cat: &[CatalogEntry], gname: &str) -> ItemReport {
    let name = format!("{gname}/shift");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let pool = small_pool(&t);
    let n = t.order() as u32;
    let mut checked = 0u64;
    for a in &pool {
        for b in &pool {
            for z in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        if !shift_check(&t, z, a, b, x, y) {
                            return ItemReport::failed(
                                &name,
                                format!("shift identity failed at z={z} x={x} y={y}"),
                            )
                            .critical_if(true);
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    ItemReport::new(&name, true, true, json!({ "triples": checked }))
}

fn shift_random(cat: &[CatalogEntry], gname: &str, cfg: &RunConfig) -> ItemReport {
    let name = format!("{gname}/shift");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let outer = outer_auto(gname, &t);
    let n = t.order() as u32;
    let mut rng = rng::substream(cfg.seed, &format!("twisted:shift:{gname}"), 0);
    for i in 0..cfg.samples {
        let a = random_auto(&t, outer.as_ref(), &mut rng);
        let b = random_auto(&t, outer.as_ref(), &mut rng);
        let (z, x, y) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        if !shift_check(&t, z, &a, &b, x, y) {
            return ItemReport::failed(&name, format!("shift identity failed at sample {i}"))
                .critical_if(true);
        }
    }
    ItemReport::new(&name, false, true, json!({ "samples": cfg.samples }))
}

// ------------------------------------------------------------ inner pair --

fn inn_exhaustive(cat: &[CatalogEntry], gname: &str) -> ItemReport {
    let name = format!("{gname}/inn");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let n = t.order() as u32;
    let mut checked = 0u64;
    for a in 0..n {
        let alpha = Automorphism::inner(&*t, a);
        for b in 0..n {
            let beta = Automorphism::inner(&*t, b);
            for x in 0..n {
                for y in 0..n {
                    let ok = match inn_witness(&*t, a, b, x, y) {
                        // the witness value is produced by raw conjugation;
                        // cross-check against the automorphism route
                        Ok(w) => w.value == t_value(&*t, &alpha, &beta, x, y),
                        Err(_) => false,
                    };
                    if !ok {
                        return ItemReport::failed(
                            &name,
                            format!("inner-pair rewrite failed at a={a} b={b} x={x} y={y}"),
                        )
                        .critical_if(true);
                    }
                    checked += 1;
                }
            }
        }
    }
    ItemReport::new(&name, true, true, json!({ "quadruples": checked }))
}

fn inn_random(cat: &[CatalogEntry], gname: &str, cfg: &RunConfig) -> ItemReport {
    let name = format!("{gname}/inn");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let n = t.order() as u32;
    let mut rng = rng::substream(cfg.seed, &format!("twisted:inn:{gname}"), 0);
    for i in 0..cfg.samples {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let ok = match inn_witness(&*t, a, b, x, y) {
            Ok(w) => {
                let alpha = Automorphism::inner(&*t, a);
                let beta = Automorphism::inner(&*t, b);
                w.value == t_value(&*t, &alpha, &beta, x, y)
            }
            Err(_) => false,
        };
        if !ok {
            return ItemReport::failed(&name, format!("inner-pair rewrite failed at sample {i}"))
                .critical_if(true);
        }
    }
    ItemReport::new(&name, false, true, json!({ "samples": cfg.samples }))
}

// -------------------------------------------------------------- reduce --

/// Four (α,β) pairs mixing members and non-members of the index-2 class, so
/// that each rewriting branch (first factor, second factor, product) is
/// taken somewhere in the reduction tree.
fn mixed_pairs(
    pool_in: &[Automorphism],
    pool_out: &[Automorphism],
) -> [(Automorphism, Automorphism); 4] {
    let i = |k: usize| pool_in[k % pool_in.len()].clone();
    let o = |k: usize| pool_out[k % pool_out.len()].clone();
    [(o(0), i(0)), (i(1), o(1)), (o(1), o(0)), (i(0), i(1))]
}

fn reduce_sym3(cat: &[CatalogEntry]) -> ItemReport {
    let name = "sym3/reduce";
    let Some(t) = table_of(cat, "sym3") else {
        return ItemReport::failed(name, "group not in catalog");
    };
    let n = t.order() as u32;
    // Δ = conjugations by rotations; conjugators are unique here (trivial
    // center), and products of two reflections conjugate by a rotation, so
    // the class has index 2 in Inn(Sym(3)) = Aut(Sym(3)).
    let rot = subgroup::derived(&*t, &Subgrp::whole(&*t));
    let in_delta = {
        let t = Arc::clone(&t);
        let rot = rot.clone();
        move |a: &Automorphism| inner_conjugator(&*t, a).map_or(false, |c| rot.contains(c))
    };
    let ins: Vec<Automorphism> = rot
        .elements
        .iter()
        .map(|x| Automorphism::inner(&*t, x))
        .collect();
    let outs: Vec<Automorphism> = (0..n)
        .filter(|&x| !rot.contains(x))
        .map(|x| Automorphism::inner(&*t, x))
        .collect();
    let pairs = mixed_pairs(&ins[1..], &outs);
    let total = (n as u64).pow(8);
    let bad = (0..n * n * n)
        .into_par_iter()
        .map(|head| {
            let x1 = head / (n * n);
            let x2 = (head / n) % n;
            let x3 = head % n;
            let mut bad = 0u64;
            for x4 in 0..n {
                for x5 in 0..n {
                    for x6 in 0..n {
                        for x7 in 0..n {
                            for x8 in 0..n {
                                let x = [x1, x2, x3, x4, x5, x6, x7, x8];
                                let ok = match reduce_index2(&*t, &pairs, &in_delta, x) {
                                    Ok(w) => reduce_index2_invert(
                                        &*t, &pairs, &in_delta, w.x_star, w.x_tilde,
                                    )
                                    .map_or(false, |back| back == x),
                                    Err(_) => false,
                                };
                                if !ok {
                                    bad += 1;
                                }
                            }
                        }
                    }
                }
            }
            bad
        })
        .sum::<u64>();
    ItemReport::new(
        name,
        true,
        bad == 0,
        json!({ "tuples": total, "failures": bad }),
    )
    .critical_if(bad > 0)
}

fn reduce_random(cat: &[CatalogEntry], gname: &str, cfg: &RunConfig) -> ItemReport {
    let name = format!("{gname}/reduce");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let n = t.order() as u32;
    let outer = outer_auto(gname, &t);
    // Δ = the inner automorphisms; with one outer factor adjoined this is a
    // genuine index-2 membership test, and with none it is everything.
    let in_delta = {
        let t = Arc::clone(&t);
        move |a: &Automorphism| inner_conjugator(&*t, a).is_some()
    };
    let mut rng = rng::substream(cfg.seed, &format!("twisted:reduce:{gname}"), 0);
    for i in 0..cfg.samples {
        let pairs: [(Automorphism, Automorphism); 4] = [(); 4].map(|_| {
            (
                random_auto(&t, outer.as_ref(), &mut rng),
                random_auto(&t, outer.as_ref(), &mut rng),
            )
        });
        let x = [(); 8].map(|_| rng.gen_range(0..n));
        let ok = match reduce_index2(&*t, &pairs, &in_delta, x) {
            Ok(w) => {
                in_delta(&w.gamma)
                    && in_delta(&w.delta)
                    && reduce_index2_invert(&*t, &pairs, &in_delta, w.x_star, w.x_tilde)
                        .map_or(false, |back| back == x)
            }
            Err(_) => false,
        };
        if !ok {
            return ItemReport::failed(&name, format!("index-2 reduction failed at sample {i}"))
                .critical_if(true);
        }
    }
    ItemReport::new(
        &name,
        false,
        true,
        json!({ "samples": cfg.samples, "has_outer": outer.is_some() }),
    )
}

// -------------------------------------------------- tuple-product lemmas --

fn uv_exhaustive(cat: &[CatalogEntry], gname: &str) -> ItemReport {
    let name = format!("{gname}/uv");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let n = t.order() as u32;
    let gens = t.gen_indices();
    let gs = [gens[0], gens[gens.len().min(2) - 1]];
    let mut checked = 0u64;
    for a1 in 0..n {
        for a2 in 0..n {
            for u1 in 0..n {
                for u2 in 0..n {
                    if !uv_identity_holds(&*t, &gs, &[vec![a1, a2]], &[vec![u1, u2]]) {
                        return ItemReport::failed(
                            &name,
                            format!("difference expansion failed at a=({a1},{a2}) u=({u1},{u2})"),
                        )
                        .critical_if(true);
                    }
                    checked += 1;
                }
            }
        }
    }
    ItemReport::new(&name, true, true, json!({ "m": 2, "tuples": checked }))
}

fn uv_random(cat: &[CatalogEntry], gname: &str, cfg: &RunConfig) -> ItemReport {
    let name = format!("{gname}/uv");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let n = t.order() as u32;
    let mut rng = rng::substream(cfg.seed, &format!("twisted:uv:{gname}"), 0);
    for i in 0..cfg.samples {
        let m = 1 + (i % 3) as usize;
        let s = 1 + (i % 2) as usize;
        let gs: Vec<u32> = (0..m).map(|_| rng.gen_range(0..n)).collect();
        let a_t: Vec<Vec<u32>> = (0..s)
            .map(|_| (0..m).map(|_| rng.gen_range(0..n)).collect())
            .collect();
        let u_t: Vec<Vec<u32>> = (0..s)
            .map(|_| (0..m).map(|_| rng.gen_range(0..n)).collect())
            .collect();
        if !uv_identity_holds(&*t, &gs, &a_t, &u_t) {
            return ItemReport::failed(&name, format!("difference expansion failed at sample {i}"))
                .critical_if(true);
        }
    }
    ItemReport::new(&name, false, true, json!({ "samples": cfg.samples }))
}

fn newgens_exhaustive(cat: &[CatalogEntry], gname: &str) -> ItemReport {
    let name = format!("{gname}/newgens");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let n = t.order() as u32;
    let mut checked = 0u64;
    for g1 in 0..n {
        for g2 in 0..n {
            for u1 in 0..n {
                for u2 in 0..n {
                    if !newgens_holds(&*t, &[g1, g2], &[u1, u2]) {
                        return ItemReport::failed(
                            &name,
                            format!("conjugate generators differ at g=({g1},{g2}) u=({u1},{u2})"),
                        )
                        .critical_if(true);
                    }
                    checked += 1;
                }
            }
        }
    }
    ItemReport::new(&name, true, true, json!({ "m": 2, "tuples": checked }))
}

fn newgens_random(cat: &[CatalogEntry], gname: &str, cfg: &RunConfig) -> ItemReport {
    let name = format!("{gname}/newgens");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let n = t.order() as u32;
    let mut rng = rng::substream(cfg.seed, &format!("twisted:newgens:{gname}"), 0);
    for i in 0..cfg.samples {
        let m = 2 + (i % 2) as usize;
        let gs: Vec<u32> = (0..m).map(|_| rng.gen_range(0..n)).collect();
        let us: Vec<u32> = (0..m).map(|_| rng.gen_range(0..n)).collect();
        if !newgens_holds(&*t, &gs, &us) {
            return ItemReport::failed(&name, format!("conjugate generators differ at sample {i}"))
                .critical_if(true);
        }
    }
    ItemReport::new(&name, false, true, json!({ "samples": cfg.samples }))
}

// -------------------------------------------- automorphism commutators --

fn comm_sets_item(cat: &[CatalogEntry], gname: &str) -> ItemReport {
    let name = format!("{gname}/comm-sets");
    let Some(t) = table_of(cat, gname) else {
        return ItemReport::failed(&name, "group not in catalog");
    };
    let whole = Subgrp::whole(&*t);
    let der = subgroup::derived(&*t, &whole);
    let fact_whole = comm_factorization_check(&*t, &whole, 3);
    let fact_der = comm_factorization_check(&*t, &der, 3);
    let (Ok(fw), Ok(fd)) = (fact_whole, fact_der) else {
        return ItemReport::failed(&name, "set products overflowed");
    };
    // pointwise identity and set inclusion for the available automorphisms
    let n = t.order() as u32;
    let all_pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .collect();
    let mut autos: Vec<Automorphism> = (0..n)
        .step_by(((n as usize) / 4).max(1))
        .map(|x| Automorphism::inner(&*t, x))
        .collect();
    if let Some(o) = outer_auto(gname, &t) {
        autos.push(o);
    }
    let mut identity_ok = true;
    let mut inclusion_ok = true;
    for a in &autos {
        identity_ok &= auto_comm_identity_check(&*t, a, &all_pairs);
        inclusion_ok &= auto_comm_set_inclusion(&*t, a).unwrap_or(false);
    }
    let pass = fw && fd && identity_ok && inclusion_ok;
    ItemReport::new(
        &name,
        true,
        pass,
        json!({
            "factorization_whole": fw,
            "factorization_derived": fd,
            "automorphisms": autos.len(),
            "pointwise_identity": identity_ok,
            "set_inclusion": inclusion_ok,
        }),
    )
    .critical_if(!pass)
}

/// Cover of a direct square by the twisted commutators of the coordinate
/// swap. For Sym(3) the square is built here and M is the subgroup those
/// commutators generate (same-parity pairs); for the Alt(5) entry the
/// catalog's swap extension provides the swapping element as an inner
/// automorphism and M is the semisimple bottom.
fn swap_cover_items(cat: &[CatalogEntry]) -> Vec<ItemReport> {
    let mut out = Vec::new();
    if let Some(t) = table_of(cat, "sym3") {
        let n = t.order();
        let sq = Arc::new(GroupTable::direct_product(&t, &t));
        let img: Vec<u32> = (0..(n * n) as u32)
            .map(|i| {
                let (a, b) = (i / n as u32, i % n as u32);
                b * n as u32 + a
            })
            .collect();
        match Automorphism::from_images(&*sq, img) {
            Ok(swap) => {
                let base: Vec<u32> = (0..(n * n) as u32).map(|m| swap.comm_with(&*sq, m)).collect();
                let m_sub = subgroup::closure(&*sq, &base);
                match auto_comm_cover(&*sq, &m_sub, &swap, 16) {
                    Ok(p) => {
                        let pass = p.reached_at.map_or(false, |f| f <= 8);
                        out.push(
                            ItemReport::new("sym3/swap-cover", true, pass, detail(&p))
                                .critical_if(!pass),
                        );
                    }
                    Err(err) => out.push(ItemReport::failed("sym3/swap-cover", err)),
                }
            }
            Err(err) => out.push(ItemReport::failed("sym3/swap-cover", err)),
        }
    }
    if let Some(t) = table_of(cat, "alt5_sq_swap") {
        let whole = Subgrp::whole(&*t);
        let m_sub = subgroup::derived(&*t, &whole);
        let item = (|| {
            let series = chief::chief_series(&t)?;
            let chief::FactorKind::Semisimple(s) = &series[0].kind else {
                return Err(groupbench_core::Error::Hypothesis(
                    "expected a semisimple bottom".into(),
                ));
            };
            let swap = (0..t.order() as u32)
                .find(|&y| s.moved_factors(y) == 2)
                .ok_or_else(|| groupbench_core::Error::Hypothesis("no swapping element".into()))?;
            auto_comm_cover(&*t, &m_sub, &Automorphism::inner(&*t, swap), 16)
        })();
        match item {
            Ok(p) => {
                let pass = p.reached_at.map_or(false, |f| f <= 8);
                out.push(
                    ItemReport::new("alt5_sq_swap/swap-cover", true, pass, detail(&p))
                        .critical_if(!pass),
                );
            }
            Err(err) => out.push(ItemReport::failed("alt5_sq_swap/swap-cover", err)),
        }
    }
    out
}

// --------------------------------------------------- coordinate bijections --

/// Monomial generators over C₂ with a transitive point action: a swap with
/// one nontrivial twist slot is impossible (C₂ has no nontrivial
/// automorphism), so all twists are trivial and the domain is tiny.
fn theta_psi_c2(cat: &[CatalogEntry]) -> ItemReport {
    let name = "elab_2_1/theta-psi";
    let Some(t) = table_of(cat, "elab_2_1") else {
        return ItemReport::failed(name, "group not in catalog");
    };
    let id2 = || Automorphism::identity(2);
    // completing the round trip on the whole domain already forces both
    // maps to be bijections there
    for m in [2usize, 4] {
        let mut gens = vec![MonomialAuto::new(vec![1, 0], vec![id2(), id2()]).unwrap()];
        for _ in 1..m {
            gens.push(MonomialAuto::permutation(2, vec![0, 1]).unwrap());
        }
        let ord = match schreier_order(&gens, 0) {
            Ok(o) => o,
            Err(err) => return ItemReport::failed(name, err),
        };
        let total = 4usize.pow(m as u32);
        for idx in 0..total {
            let x: Vec<Vec<u32>> = (0..m)
                .map(|i| vec![(idx >> (2 * i)) as u32 & 1, (idx >> (2 * i + 1)) as u32 & 1])
                .collect();
            let ok = match (theta_map(&*t, &gens, &x), psi_map(&*t, &gens, &ord, &x)) {
                (Ok(ti), Ok(pi)) => {
                    theta_inverse(&*t, &gens, &ti).map_or(false, |b| b == x)
                        && psi_inverse(&*t, &gens, &ord, &pi).map_or(false, |b| b == x)
                }
                _ => false,
            };
            if !ok {
                return ItemReport::failed(name, format!("round trip failed at index {idx}, m={m}"))
                    .critical_if(true);
            }
        }
    }
    ItemReport::new(name, true, true, json!({ "domains": [16, 256] }))
}

fn theta_psi_alt5(cat: &[CatalogEntry], cfg: &RunConfig) -> ItemReport {
    let name = "alt5/theta-psi";
    let Some(t) = table_of(cat, "alt5") else {
        return ItemReport::failed(name, "group not in catalog");
    };
    let tw = |g: u32| Automorphism::inner(&*t, g);
    let gens = [
        MonomialAuto::new(vec![1, 2, 0], vec![tw(7), Automorphism::identity(60), tw(30)]).unwrap(),
        MonomialAuto::new(vec![2, 0, 1], vec![Automorphism::identity(60), tw(11), tw(3)]).unwrap(),
    ];
    let ord = match schreier_order(&gens, 0) {
        Ok(o) => o,
        Err(err) => return ItemReport::failed(name, err),
    };
    let trials = cfg.samples.min(1_000);
    let mut rng = rng::substream(cfg.seed, "twisted:theta-psi:alt5", 0);
    for i in 0..trials {
        let x: Vec<Vec<u32>> = (0..2)
            .map(|_| (0..3).map(|_| rng.gen_range(0..60u32)).collect())
            .collect();
        let ok = match (theta_map(&*t, &gens, &x), psi_map(&*t, &gens, &ord, &x)) {
            (Ok(ti), Ok(pi)) => {
                theta_inverse(&*t, &gens, &ti).map_or(false, |b| b == x)
                    && psi_inverse(&*t, &gens, &ord, &pi).map_or(false, |b| b == x)
            }
            _ => false,
        };
        if !ok {
            return ItemReport::failed(name, format!("round trip failed at sample {i}"))
                .critical_if(true);
        }
    }
    ItemReport::new(name, false, true, json!({ "samples": trials, "power": 3 }))
}

// ------------------------------------------------------------- coverage --

fn coverage_items(cat: &[CatalogEntry], cfg: &RunConfig) -> Vec<ItemReport> {
    let mut out = Vec::new();
    // Alt(5), inner pairs: the first image set is already everything
    if let Some(t) = table_of(cat, "alt5") {
        let pairs = vec![(Automorphism::inner(&*t, 9), Automorphism::inner(&*t, 44))];
        match coverage_t(&t, &pairs, 0, 0) {
            Ok(r) => {
                let pass = r.exact && r.d_prime == Some(1);
                out.push(ItemReport::new("alt5/coverage-t", true, pass, detail(&r)).critical_if(!pass));
            }
            Err(err) => out.push(ItemReport::failed("alt5/coverage-t", err)),
        }
    }
    // PSL(2,7) with an outer factor in each pair
    if let Some(t) = table_of(cat, "psl2_7") {
        match outer_auto("psl2_7", &t) {
            Some(diag) => {
                let pairs = vec![
                    (Automorphism::inner(&*t, 12), diag.clone()),
                    (diag, Automorphism::inner(&*t, 101)),
                ];
                match coverage_t(&t, &pairs, 0, 0) {
                    Ok(r) => {
                        let pass = r.exact && r.d_prime == Some(1);
                        out.push(
                            ItemReport::new("psl2_7/coverage-t", true, pass, detail(&r))
                                .critical_if(!pass),
                        );
                    }
                    Err(err) => out.push(ItemReport::failed("psl2_7/coverage-t", err)),
                }
            }
            None => out.push(ItemReport::failed("psl2_7/coverage-t", "no outer automorphism")),
        }
    }
    // SL(2,5) is quasisimple but not simple: coverage may take two factors
    if let Some(t) = table_of(cat, "sl2_5") {
        let pairs: Vec<_> = [3u32, 17, 40]
            .iter()
            .map(|&a| (Automorphism::inner(&*t, a), Automorphism::inner(&*t, t.inv(a))))
            .collect();
        match coverage_t(&t, &pairs, 0, 0) {
            Ok(r) => {
                let pass = r.exact && r.d_prime.is_some();
                out.push(
                    ItemReport::new("sl2_5/coverage-t", true, pass, detail(&r)).critical_if(!pass),
                );
            }
            Err(err) => out.push(ItemReport::failed("sl2_5/coverage-t", err)),
        }
    }
    // C₂ is not quasisimple and must be refused up front
    if let Some(t) = table_of(cat, "elab_2_1") {
        let id = Automorphism::identity(2);
        let refused = coverage_t(&t, &[(id.clone(), id)], 0, 0).is_err();
        out.push(ItemReport::new(
            "elab_2_1/coverage-t-refused",
            true,
            refused,
            json!({ "refused": refused }),
        ));
    }
    out.push(comm20_double(cat, cfg));
    out.push(comm20_triple(cat, cfg));
    out
}

/// N = Alt(5)², tuples of twelve coordinate swaps: every entry moves both
/// points, so k·η meets the 4 + 2D threshold, and the exact layering covers
/// N in three factors. Two factors is below the three-factor hypothesis of
/// the decomposition statement, and the report says so.
fn comm20_double(cat: &[CatalogEntry], _cfg: &RunConfig) -> ItemReport {
    let name = "alt5_sq/comm20";
    let Some(s) = table_of(cat, "alt5") else {
        return ItemReport::failed(name, "group not in catalog");
    };
    // a fixed tuple family whose exact layering is known to finish in three
    // factors; the run seed deliberately does not vary it
    let mut rng = rng::substream(41, "comm20", 0);
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
    match comm20_coverage(&s, 2, &ys, 1.0, 4, 1.0, 0.125, 0, 0) {
        Ok(r) => {
            let pass = r.exact
                && r.transitive_ok
                && r.k_eta_ok
                && r.w_threshold_ok
                && !r.at_least_three_factors
                && r.reached_at == Some(3)
                && r.layer_sizes.as_ref().and_then(|l| l.last().copied()) == Some(3600);
            ItemReport::new(name, true, pass, detail(&r))
        }
        Err(err) => ItemReport::failed(name, err),
    }
}

/// N = Alt(5)³ with twisted 3-cycles on the coordinates: too big for exact
/// layering, so coverage is sampled. The tuples are length 2 with every
/// entry moving all three points; k·η = 2 sits below the 4 + 2D threshold,
/// which the report records honestly while the probes still measure how
/// much of N the product reaches.
fn comm20_triple(cat: &[CatalogEntry], cfg: &RunConfig) -> ItemReport {
    let name = "alt5_cubed/comm20";
    let Some(s) = table_of(cat, "alt5") else {
        return ItemReport::failed(name, "group not in catalog");
    };
    let mut rng = rng::substream(cfg.seed, "twisted:comm20:triple", 0);
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
    let probes = cfg.samples.saturating_mul(250);
    match comm20_coverage(&s, 3, &ys, 1.0, 4, 1.0, 0.125, probes, cfg.seed) {
        Ok(r) => {
            let Some((hits, _)) = r.sampled else {
                return ItemReport::failed(name, "expected the sampled path");
            };
            // the 99.9% coupon-collector threshold only applies once the
            // probe count can plausibly reach it
            let coverage_ok = probes < 1_500_000 || hits as f64 >= 0.999 * 216_000.0;
            let pass = !r.exact && r.transitive_ok && hits > 0 && coverage_ok;
            ItemReport::new(name, false, pass, detail(&r))
        }
        Err(err) => ItemReport::failed(name, err),
    }
}

const RANDOM_GROUPS: [&str; 3] = ["alt5", "alt6", "psl2_7"];

type Task<'a> = Box<dyn Fn() -> ItemReport + Sync + Send + 'a>;

pub fn run(cat: &[CatalogEntry], cfg: &RunConfig) -> Vec<ItemReport> {
    // items are independent; run them on the pool, keeping a fixed order
    let mut tasks: Vec<Task<'_>> = Vec::new();
    for g in ["sym3", "dih8"] {
        tasks.push(Box::new(move || merge_exhaustive(cat, g)));
        tasks.push(Box::new(move || shift_exhaustive(cat, g)));
        tasks.push(Box::new(move || inn_exhaustive(cat, g)));
        tasks.push(Box::new(move || uv_exhaustive(cat, g)));
        tasks.push(Box::new(move || newgens_exhaustive(cat, g)));
    }
    tasks.push(Box::new(move || reduce_sym3(cat)));
    tasks.push(Box::new(move || reduce_random(cat, "dih8", cfg)));
    for g in RANDOM_GROUPS {
        tasks.push(Box::new(move || merge_random(cat, g, cfg)));
        tasks.push(Box::new(move || shift_random(cat, g, cfg)));
        tasks.push(Box::new(move || inn_random(cat, g, cfg)));
        tasks.push(Box::new(move || reduce_random(cat, g, cfg)));
        tasks.push(Box::new(move || uv_random(cat, g, cfg)));
        tasks.push(Box::new(move || newgens_random(cat, g, cfg)));
    }
    for g in ["sym3", "dih8", "q8", "sym4", "alt5"] {
        tasks.push(Box::new(move || comm_sets_item(cat, g)));
    }
    tasks.push(Box::new(move || theta_psi_c2(cat)));
    tasks.push(Box::new(move || theta_psi_alt5(cat, cfg)));
    let mut items: Vec<ItemReport> = tasks.par_iter().map(|t| t()).collect();
    items.extend(swap_cover_items(cat));
    items.extend(coverage_items(cat, cfg));
    items
}
