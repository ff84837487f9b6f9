//! Width suite: exact commutator width for the simple and quasisimple
//! entries, layered commutator-product profiles over seeded symmetric
//! generating multisets (H = G, H = G′, H = a random minimal normal
//! subgroup), verbal width instances, class-cover profiles with the fitted
//! covering constant, generator-conjugation witnesses, and a sampled
//! coverage row for the one group past the table cap.

use groupbench_core::subgroup::{self, Subgrp};
use groupbench_core::table::GroupOps;
use groupbench_core::words::Word;
use groupbench_core::{chief, rng, width, Error};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::config::RunConfig;
use crate::report::{detail, ItemReport};

use super::util::symmetric_generating;

const THEOREM_B_SETS: usize = 20;
const THEOREM_B_ORDER_CAP: u128 = 20_000;
const REORDERINGS: usize = 5;

#[derive(Serialize)]
struct OreChecks {
    order: usize,
    commutator_count: usize,
    width: Option<usize>,
    bound: usize,
}

fn ore_item(e: &CatalogEntry) -> ItemReport {
    let t = match e.group.table() {
        Ok(t) => t,
        Err(err) => return ItemReport::failed(format!("{}/ore", e.name), err),
    };
    let whole = Subgrp::whole(&*t);
    let profile = match width::commutator_width(&*t, &whole) {
        Ok(p) => p,
        Err(err) => return ItemReport::failed(format!("{}/ore", e.name), err),
    };
    // simple groups have width 1; quasisimple ones at most 2
    let bound = if e.tags.simple { 1 } else { 2 };
    let checks = OreChecks {
        order: t.order(),
        commutator_count: profile.layer_sizes.first().copied().unwrap_or(0),
        width: profile.reached_at,
        bound,
    };
    let pass = matches!(checks.width, Some(f) if f <= bound);
    ItemReport::new(format!("{}/ore", e.name), true, pass, detail(&checks)).critical_if(!pass)
}

#[derive(Serialize)]
struct ProfileRow {
    y_len: usize,
    f_whole: usize,
    f_derived: usize,
    f_minimal_normal: usize,
    minimal_normal_order: usize,
}

#[derive(Serialize)]
pub struct ThmBChecks {
    pub d_min: usize,
    pub d_method: &'static str,
    /// min and max f for H = G over random reorderings of the first multiset
    pub reorder_f: Option<(usize, usize)>,
    pub nilpotent_f1: Option<bool>,
    pub rows: Vec<ProfileRow>,
}

fn thmb_item(e: &CatalogEntry, cfg: &RunConfig, idx: u64) -> ItemReport {
    let name = format!("{}/profile", e.name);
    let t = match e.group.table() {
        Ok(t) => t,
        Err(err) => return ItemReport::failed(&name, err),
    };
    let mut rng = rng::substream(cfg.seed, "width-profile", idx);
    let whole = Subgrp::whole(&*t);
    let derived = subgroup::derived(&*t, &whole);
    let minimals = chief::minimal_normal_subgroups(&t);
    let (d_min, d_method) = subgroup::min_generators(&t, cfg.seed ^ idx);

    let mut rows = Vec::with_capacity(THEOREM_B_SETS);
    let mut reorder_f = None;
    let mut all_finite = true;
    let mut nilpotent_f1 = if e.tags.nilpotent { Some(true) } else { None };
    for set_no in 0..THEOREM_B_SETS {
        let Some(ys) = symmetric_generating(&t, &mut rng, 400) else {
            return ItemReport::failed(&name, "no generating multiset found");
        };
        let h_min = if minimals.is_empty() {
            whole.clone()
        } else {
            minimals[rng.gen_range(0..minimals.len())].clone()
        };
        let mut fs = [0usize; 3];
        for (slot, h) in [&whole, &derived, &h_min].into_iter().enumerate() {
            match width::comm_product_profile(&*t, &ys, h) {
                Ok(p) => match p.reached_at {
                    Some(f) => fs[slot] = f,
                    None => {
                        all_finite = false;
                    }
                },
                Err(err) => return ItemReport::failed(&name, err),
            }
        }
        if e.tags.nilpotent && fs[0] != 1 {
            nilpotent_f1 = Some(false);
        }
        if set_no == 0 && t.order() > 1 {
            let mut lo = usize::MAX;
            let mut hi = 0usize;
            for _ in 0..REORDERINGS {
                let mut perm_ys = ys.clone();
                perm_ys.shuffle(&mut rng);
                match width::comm_product_profile(&*t, &perm_ys, &whole) {
                    Ok(p) => {
                        if let Some(f) = p.reached_at {
                            lo = lo.min(f);
                            hi = hi.max(f);
                        } else {
                            all_finite = false;
                        }
                    }
                    Err(err) => return ItemReport::failed(&name, err),
                }
            }
            reorder_f = Some((lo, hi));
        }
        rows.push(ProfileRow {
            y_len: ys.len(),
            f_whole: fs[0],
            f_derived: fs[1],
            f_minimal_normal: fs[2],
            minimal_normal_order: h_min.order(),
        });
    }

    let checks = ThmBChecks {
        d_min,
        d_method,
        reorder_f,
        nilpotent_f1,
        rows,
    };
    // a non-finite f or a nilpotent group needing f > 1 contradicts proven
    // statements
    let pass = all_finite && checks.nilpotent_f1.unwrap_or(true);
    ItemReport::new(&name, true, pass, detail(&checks)).critical_if(!pass)
}

#[derive(Serialize)]
struct CoverChecks {
    covers: Vec<width::ClassCover>,
    fitted_constant: Option<f64>,
}

fn class_cover_item(e: &CatalogEntry) -> ItemReport {
    let name = format!("{}/class-cover", e.name);
    let t = match e.group.table() {
        Ok(t) => t,
        Err(err) => return ItemReport::failed(&name, err),
    };
    match width::class_cover_profiles(&t, 64) {
        Ok(covers) => {
            // simplicity forces every nontrivial class to generate, so every
            // cover must terminate
            let pass = covers.iter().all(|c| c.exponent.is_some());
            let fitted = width::fitted_cover_constant(&t, &covers);
            let checks = CoverChecks {
                covers,
                fitted_constant: fitted,
            };
            ItemReport::new(&name, true, pass, detail(&checks)).critical_if(!pass)
        }
        Err(err) => ItemReport::failed(&name, err),
    }
}

#[derive(Serialize)]
struct WordInstance {
    group: String,
    word: &'static str,
    report: width::WordWidthReport,
}

fn word_items(cat: &[CatalogEntry]) -> Vec<ItemReport> {
    let mut out = Vec::new();
    let by_name = |n: &str| cat.iter().find(|e| e.name == n);
    // squares in Q8: values {±1}, width 1, index 4
    if let Some(e) = by_name("q8") {
        if let Ok(t) = e.group.table() {
            let w = Word::power(2);
            match width::word_width(&t, &w, 0, 0) {
                Ok(r) => {
                    let pass = r.width == Some(1) && r.beta == 4 && r.exact;
                    let inst = WordInstance {
                        group: e.name.clone(),
                        word: "x^2",
                        report: r,
                    };
                    out.push(ItemReport::new("q8/word-squares", true, pass, detail(&inst)));
                }
                Err(err) => out.push(ItemReport::failed("q8/word-squares", err)),
            }
        }
    }
    // the commutator word on Alt(5): width 1, verbal subgroup everything
    if let Some(e) = by_name("alt5") {
        if let Ok(t) = e.group.table() {
            let w = Word::commutator();
            match width::word_width(&t, &w, 0, 0) {
                Ok(r) => {
                    let pass = r.width == Some(1) && r.beta == 1 && r.exact;
                    let inst = WordInstance {
                        group: e.name.clone(),
                        word: "[x,y]",
                        report: r,
                    };
                    out.push(ItemReport::new(
                        "alt5/word-commutator",
                        true,
                        pass,
                        detail(&inst),
                    ));
                }
                Err(err) => out.push(ItemReport::failed("alt5/word-commutator", err)),
            }
        }
    }
    out
}

#[derive(Serialize)]
struct WitnessChecks {
    j_found: Option<usize>,
    conclusive: bool,
    restarts_used: u64,
}

fn witness_items(cat: &[CatalogEntry], cfg: &RunConfig) -> Vec<ItemReport> {
    let mut out = Vec::new();
    // Sym(3), K = the rotation subgroup, Y = {transposition}: two conjugates
    // of the transposition generate, so j = 2 is reachable
    if let Some(e) = cat.iter().find(|e| e.name == "sym3") {
        if let Ok(t) = e.group.table() {
            let k_sub = subgroup::derived(&*t, &Subgrp::whole(&*t));
            let y = (1..t.order() as u32)
                .find(|&x| t.elem_order(x) == 2)
                .expect("transposition");
            match width::conjugate_generation_witness(&t, &k_sub, &[y], 3, 50, cfg.seed) {
                Ok(r) => {
                    let pass = r.j_found == Some(2) && r.conclusive;
                    let checks = WitnessChecks {
                        j_found: r.j_found,
                        conclusive: r.conclusive,
                        restarts_used: r.restarts_used,
                    };
                    out.push(ItemReport::new("sym3/witness", false, pass, detail(&checks)));
                }
                Err(err) => out.push(ItemReport::failed("sym3/witness", err)),
            }
        }
    }
    // Alt(5)×C₆ with K = the Alt(5) factor: K is not inside G₀ = C₆, so the
    // hypothesis must be rejected
    if let Some(e) = cat.iter().find(|e| e.name == "alt5_x_c6") {
        if let Ok(t) = e.group.table() {
            let mins = chief::minimal_normal_subgroups(&t);
            let k_sub = mins.iter().find(|m| m.order() == 60).cloned();
            if let Some(k_sub) = k_sub {
                let y = (1..t.order() as u32)
                    .find(|&x| {
                        subgroup::join(&*t, &k_sub, &subgroup::closure(&*t, &[x])).order()
                            == t.order()
                    })
                    .unwrap_or(1);
                let got = width::conjugate_generation_witness(&t, &k_sub, &[y], 4, 10, cfg.seed);
                let pass = matches!(got, Err(Error::Hypothesis(_)));
                out.push(ItemReport::new(
                    "alt5_x_c6/witness-hypothesis",
                    true,
                    pass,
                    serde_json::json!({ "rejected": pass }),
                ));
            }
        }
    }
    out
}

/// Sampled coverage through stabilizer-chain coordinates for the order-648000
/// entry: base ∏ᵢ[H,yᵢ] with H the semisimple bottom and Y the rotation pair.
fn perm_coverage_item(e: &CatalogEntry, cfg: &RunConfig) -> ItemReport {
    let name = format!("{}/coverage", e.name);
    let (degree, gens) = match (e.group.degree(), e.group.generators()) {
        (Some(d), Some(g)) => (d, g.to_vec()),
        _ => return ItemReport::failed(&name, "no permutation backend"),
    };
    let rot = gens
        .iter()
        .find(|p| p.order() == 3 && p.support() == degree)
        .cloned();
    let Some(rot) = rot else {
        return ItemReport::failed(&name, "rotation generator not found");
    };
    let base_gens: Vec<groupbench_core::Perm> = gens
        .iter()
        .filter(|p| p.support() < degree)
        .cloned()
        .collect();
    let h = chief::perm_normal_closure(degree, &gens, &base_gens);
    let ys = vec![rot.clone(), rot.inverse()];
    match width::comm_product_coverage_perm(degree, &gens, &h, &ys, cfg.samples, 4, cfg.seed) {
        Ok(profile) => {
            let pass = true; // coverage is recorded, not asserted, off the exact path
            ItemReport::new(&name, profile.exact, pass, detail(&profile))
        }
        Err(err) => ItemReport::failed(&name, err),
    }
}

pub fn run(cat: &[CatalogEntry], cfg: &RunConfig) -> Vec<ItemReport> {
    let mut items: Vec<ItemReport> = cat
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, e)| {
            let mut out = Vec::new();
            if !e.group.has_table() {
                out.push(perm_coverage_item(e, cfg));
                return out.into_iter();
            }
            let order = e.group.order();
            if (e.tags.simple || e.tags.quasisimple) && order <= cfg.max_order {
                out.push(ore_item(e));
            }
            if e.tags.simple && order <= 10_000 && order <= cfg.max_order {
                out.push(class_cover_item(e));
            }
            if order <= THEOREM_B_ORDER_CAP.min(cfg.max_order) {
                out.push(thmb_item(e, cfg, i as u64));
            } else {
                out.push(ItemReport::skipped(
                    format!("{}/profile", e.name),
                    format!("order {} exceeds cap {}", order, THEOREM_B_ORDER_CAP.min(cfg.max_order)),
                ));
            }
            out.into_iter()
        })
        .collect();
    items.extend(word_items(cat));
    items.extend(witness_items(cat, cfg));
    items
}
