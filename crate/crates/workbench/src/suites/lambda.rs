//! Conjugacy-growth suite. For every simple catalog entry small enough to
//! scan exhaustively: the λ invariant vanishes exactly on the center, is
//! invariant under inversion, and is subadditive over all pairs; and every
//! nontrivial class, closed under inversion, covers the group in finitely
//! many product rounds. The SU(2) model case runs alongside: targets at
//! every trace angle factor into ⌈2/ε⌉ conjugates of a λ = ε element, with
//! the product re-verified to the pinned operator-norm tolerance.

use groupbench_core::lambda::{lambda_property_report, min_conj_cover};
use groupbench_core::su2::{su2_product_witness, Su2Element, WITNESS_TOL};
use groupbench_core::table::GroupOps;
use groupbench_core::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::catalog::CatalogEntry;
use crate::config::RunConfig;
use crate::report::{detail, ItemReport};

const EXHAUSTIVE_CAP: u128 = 10_000;

fn property_item(e: &CatalogEntry) -> ItemReport {
    let name = format!("{}/lambda-properties", e.name);
    let t = match e.group.table() {
        Ok(t) => t,
        Err(err) => return ItemReport::failed(&name, err),
    };
    match lambda_property_report(&t) {
        Ok(p) => {
            let pass = p.zero_iff_central && p.symmetry_ok && p.subadditivity_violations == 0;
            ItemReport::new(&name, true, pass, detail(&p)).critical_if(!pass)
        }
        Err(err) => ItemReport::failed(&name, err),
    }
}

#[derive(Serialize)]
struct CoverRow {
    class_size: usize,
    rounds: usize,
}

fn cover_item(e: &CatalogEntry) -> ItemReport {
    let name = format!("{}/conj-cover", e.name);
    let t = match e.group.table() {
        Ok(t) => t,
        Err(err) => return ItemReport::failed(&name, err),
    };
    let mut rows = Vec::new();
    let mut max_rounds = 0usize;
    for class in t.classes().classes.iter().skip(1) {
        match min_conj_cover(&t, class[0]) {
            Ok(p) => {
                max_rounds = max_rounds.max(p.rounds);
                rows.push(CoverRow {
                    class_size: class.len(),
                    rounds: p.rounds,
                });
            }
            Err(err) => {
                // every nontrivial class of a simple group covers, so a
                // non-converging cover means a broken product chain
                return ItemReport::failed(&name, err).critical_if(true);
            }
        }
    }
    ItemReport::new(
        &name,
        true,
        true,
        json!({ "classes": rows, "max_rounds": max_rounds }),
    )
}

const SU2_EPSILONS: [f64; 4] = [0.1, 0.25, 0.5, 1.0];
const SU2_TARGETS: u64 = 100;

fn random_axis(rng: &mut impl Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

fn su2_item(eps: f64, cfg: &RunConfig) -> ItemReport {
    let name = format!("su2/sweep-eps-{eps:.2}");
    let n = (2.0 / eps).ceil() as usize;
    let mut rng = rng::substream(cfg.seed, &name, 0);
    let mut max_err = 0.0f64;
    let mut max_dev = 0.0f64;
    for i in 0..SU2_TARGETS {
        let g = match Su2Element::from_scalar_axis(
            eps * std::f64::consts::FRAC_PI_2,
            random_axis(&mut rng),
        ) {
            Ok(g) => g,
            Err(err) => return ItemReport::failed(&name, err),
        };
        let h = match Su2Element::from_scalar_axis(
            rng.gen_range(0.0..=std::f64::consts::PI),
            random_axis(&mut rng),
        ) {
            Ok(h) => h,
            Err(err) => return ItemReport::failed(&name, err),
        };
        match su2_product_witness(&g, &h, n) {
            Ok(w) => {
                max_err = max_err.max(w.product_error);
                max_dev = max_dev.max(w.max_trace_dev);
                if w.conjugates.len() != n || w.product_error > WITNESS_TOL {
                    return ItemReport::failed(&name, format!("witness out of tolerance at target {i}"))
                        .critical_if(true);
                }
            }
            Err(err) => {
                return ItemReport::failed(&name, format!("target {i}: {err}")).critical_if(true)
            }
        }
    }
    ItemReport::new(
        &name,
        false,
        true,
        json!({
            "factors": n,
            "targets": SU2_TARGETS,
            "max_product_error": max_err,
            "max_trace_deviation": max_dev,
            "tolerance": WITNESS_TOL,
        }),
    )
}

pub fn run(cat: &[CatalogEntry], cfg: &RunConfig) -> Vec<ItemReport> {
    let mut items: Vec<ItemReport> = cat
        .par_iter()
        .flat_map_iter(|e| {
            let mut out = Vec::new();
            if !e.tags.simple {
                return out.into_iter();
            }
            let order = e.group.order();
            let cap = EXHAUSTIVE_CAP.min(cfg.max_order);
            if order > cap {
                out.push(ItemReport::skipped(
                    format!("{}/lambda-properties", e.name),
                    format!("order {order} exceeds cap {cap}"),
                ));
                return out.into_iter();
            }
            out.push(property_item(e));
            out.push(cover_item(e));
            out.into_iter()
        })
        .collect();
    items.extend(SU2_EPSILONS.iter().map(|&eps| su2_item(eps, cfg)));
    items
}
