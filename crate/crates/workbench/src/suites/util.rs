//! Shared helpers for suite item generation.

use groupbench_core::subgroup::closure;
use groupbench_core::table::GroupOps;
use groupbench_core::GroupTable;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A symmetric generating multiset: k random nonidentity elements together
/// with their inverses, resampled until the closure is the whole group.
/// Groups needing many generators get them as k grows with the attempt
/// counter. Returns None only if the budget runs out.
pub fn symmetric_generating(
    t: &GroupTable,
    rng: &mut ChaCha8Rng,
    max_tries: usize,
) -> Option<Vec<u32>> {
    let n = t.order() as u32;
    if n == 1 {
        return Some(vec![0]);
    }
    for attempt in 0..max_tries {
        let k = 1 + (attempt / 8 + rng.gen_range(0..3)).min(4);
        let mut ys: Vec<u32> = Vec::with_capacity(2 * k);
        for _ in 0..k {
            ys.push(rng.gen_range(1..n));
        }
        let picked = ys.clone();
        for x in picked {
            ys.push(t.inv(x));
        }
        if closure(t, &ys).order() == t.order() {
            return Some(ys);
        }
    }
    None
}
