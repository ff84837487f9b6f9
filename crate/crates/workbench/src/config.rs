use serde::Serialize;

/// Knobs shared by every suite. `samples` scales the randomized parts
/// (random tuples, Gowers triples, coverage probes); exhaustive parts ignore
/// it. `max_order` caps the table-backed work: larger groups are surfaced as
/// skipped items rather than silently dropped.
#[derive(Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub max_order: u128,
    pub samples: u64,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_MAX_ORDER: u128 = 20_000;
pub const DEFAULT_SAMPLES: u64 = 10_000;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            max_order: DEFAULT_MAX_ORDER,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl RunConfig {
    /// A configuration scaled down for quick smoke runs and tests.
    pub fn quick(seed: u64) -> Self {
        RunConfig {
            seed,
            max_order: 400,
            samples: 200,
        }
    }
}
