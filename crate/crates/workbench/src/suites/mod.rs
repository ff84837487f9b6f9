//! Suite orchestration: each suite maps the catalog (or a fixed instance
//! list) to a vector of item reports. Items run on the rayon pool; results
//! are collected in catalog order and every random decision draws from a
//! per-item substream of the run seed, so reports are reproducible
//! regardless of thread scheduling.

use std::time::Instant;

use groupbench_core::{Error, Result};

use crate::catalog::CatalogEntry;
use crate::config::RunConfig;
use crate::report::{RunReport, SuiteReport};

pub mod fpp;
pub mod gowers;
pub mod lambda;
pub mod structure;
pub mod twisted;
pub(crate) mod util;
pub mod width;

/// Canonical execution order; also the order suites appear in a full report.
pub const SUITE_ORDER: [&str; 7] = [
    "structure", "fpp", "width", "gowers", "twisted", "lambda", "oracle",
];

fn run_one(name: &str, cat: &[CatalogEntry], cfg: &RunConfig) -> SuiteReport {
    let items = match name {
        "structure" => structure::run(cat, cfg),
        "fpp" => fpp::run(cat, cfg),
        "width" => width::run(cat, cfg),
        "gowers" => gowers::run(cat, cfg),
        "twisted" => twisted::run(cat, cfg),
        "lambda" => lambda::run(cat, cfg),
        "oracle" => crate::oracle::run(cat, cfg),
        _ => unreachable!("validated before dispatch"),
    };
    SuiteReport::new(name, items)
}

fn canonical_name(name: &str) -> Result<&'static str> {
    // "identities" is accepted as the historical name of the twisted suite
    let n = match name {
        "structure" => "structure",
        "fpp" => "fpp",
        "width" => "width",
        "gowers" => "gowers",
        "twisted" | "identities" => "twisted",
        "lambda" => "lambda",
        "oracle" => "oracle",
        other => return Err(Error::Invalid(format!("unknown suite: {other}"))),
    };
    Ok(n)
}

/// Run the named suites over the catalog. Unknown names are rejected before
/// anything runs; an empty list yields an empty (passing) report. Per-item
/// failures are recorded in the report, never propagated as errors.
pub fn run_suites(names: &[&str], cat: &[CatalogEntry], cfg: &RunConfig) -> Result<RunReport> {
    let mut wanted = Vec::new();
    for n in names {
        let c = canonical_name(n)?;
        if !wanted.contains(&c) {
            wanted.push(c);
        }
    }
    let mut report = RunReport::new(cfg);
    for suite in SUITE_ORDER {
        if !wanted.contains(&suite) {
            continue;
        }
        let t0 = Instant::now();
        let sr = run_one(suite, cat, cfg);
        report.push(sr, t0.elapsed().as_millis());
    }
    Ok(report)
}
