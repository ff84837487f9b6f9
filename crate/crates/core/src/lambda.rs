//! Conjugacy growth on finite simple groups. λ(s) = log|s^L| / log|L| is a
//! normalized measure of how large an element's conjugacy class is; it
//! vanishes exactly on the center, is symmetric under inversion and
//! conjugation, and is subadditive. All comparisons are done with the exact
//! integer pair (|s^L|, |L|) — floats are attached for display. The module
//! also measures the minimal number of rounds M for which the M-fold product
//! set (s^L ∪ s^{−L})^{*M} covers the whole group.

use serde::Serialize;

use crate::elset::ElementSet;
use crate::error::{Error, Result};
use crate::subgroup::normal_closure;
use crate::table::{GroupOps, GroupTable};
use crate::width::set_product;

/// λ(s) as the exact pair (class size, group order) plus the float ratio
/// log(class size) / log(group order).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LambdaValue {
    pub class_size: u64,
    pub group_order: u64,
    pub value: f64,
}

impl LambdaValue {
    fn new(class_size: u64, group_order: u64) -> LambdaValue {
        let value = if class_size <= 1 {
            0.0
        } else {
            (class_size as f64).ln() / (group_order as f64).ln()
        };
        LambdaValue {
            class_size,
            group_order,
            value,
        }
    }
}

fn ensure_simple(t: &GroupTable) -> Result<()> {
    if t.order() < 2 {
        return Err(Error::Hypothesis("trivial group is not simple".into()));
    }
    for class in t.classes().classes.iter().skip(1) {
        if !normal_closure(t, &[class[0]]).is_whole() {
            return Err(Error::Hypothesis(
                "group has a proper nontrivial normal subgroup".into(),
            ));
        }
    }
    Ok(())
}

pub fn lambda_finite(t: &GroupTable, s: u32) -> Result<LambdaValue> {
    ensure_simple(t)?;
    let cd = t.classes();
    let size = cd.classes[cd.class_of[s as usize] as usize].len() as u64;
    Ok(LambdaValue::new(size, t.order() as u64))
}

/// Exhaustive property check for λ on one simple group: vanishing exactly on
/// the center, invariance under inversion and conjugation (as exact class
/// equalities), and subadditivity over every pair in integer form
/// |(st)^L| ≤ |s^L|·|t^L|.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaProfile {
    pub group_order: usize,
    /// one value per conjugacy class, identity class first
    pub class_values: Vec<LambdaValue>,
    pub min_nontrivial: Option<f64>,
    pub zero_iff_central: bool,
    pub symmetry_ok: bool,
    pub pairs_checked: u64,
    pub subadditivity_violations: u64,
}

pub fn lambda_property_report(t: &GroupTable) -> Result<LambdaProfile> {
    ensure_simple(t)?;
    let n = t.order();
    if n > 10_000 {
        return Err(Error::Hypothesis(
            "exhaustive pair scan is capped at order 10^4".into(),
        ));
    }
    let cd = t.classes();
    let order = n as u64;
    let class_values: Vec<LambdaValue> = cd
        .classes
        .iter()
        .map(|c| LambdaValue::new(c.len() as u64, order))
        .collect();
    let min_nontrivial = class_values
        .iter()
        .filter(|v| v.class_size > 1)
        .map(|v| v.value)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));

    let center = t.center();
    let zero_iff_central = (0..n as u32).all(|s| {
        let size = cd.classes[cd.class_of[s as usize] as usize].len();
        (size == 1) == center.contains(&s)
    });

    let size_of = |x: u32| cd.classes[cd.class_of[x as usize] as usize].len() as u64;
    let mut symmetry_ok = true;
    for s in 0..n as u32 {
        if size_of(t.inv(s)) != size_of(s) {
            symmetry_ok = false;
        }
        for u in 0..n as u32 {
            if cd.class_of[t.conj(s, u) as usize] != cd.class_of[s as usize] {
                symmetry_ok = false;
            }
        }
    }

    let mut violations = 0u64;
    for s in 0..n as u32 {
        let ls = size_of(s);
        for u in 0..n as u32 {
            if size_of(t.mul(s, u)) > ls * size_of(u) {
                violations += 1;
            }
        }
    }

    Ok(LambdaProfile {
        group_order: n,
        class_values,
        min_nontrivial,
        zero_iff_central,
        symmetry_ok,
        pairs_checked: order * order,
        subadditivity_violations: violations,
    })
}

/// Minimal M with (s^L ∪ s^{−L})^{*M} = L, with the layer-size profile.
#[derive(Clone, Debug, Serialize)]
pub struct CoverProfile {
    pub rounds: usize,
    pub layer_sizes: Vec<usize>,
}

pub fn min_conj_cover(t: &GroupTable, s: u32) -> Result<CoverProfile> {
    ensure_simple(t)?;
    if t.center().contains(&s) {
        return Err(Error::Hypothesis(
            "central element never covers the group".into(),
        ));
    }
    let n = t.order();
    let cd = t.classes();
    let mut seed = ElementSet::empty(n);
    for &x in &cd.classes[cd.class_of[s as usize] as usize] {
        seed.insert(x);
        seed.insert(t.inv(x));
    }
    let mut cur = seed.clone();
    let mut layers = vec![cur.len()];
    while cur.len() < n {
        if layers.len() > n {
            return Err(Error::NoConvergence(
                "cover layers stopped growing before reaching the group".into(),
            ));
        }
        cur = set_product(t, &cur, &seed)?;
        layers.push(cur.len());
    }
    Ok(CoverProfile {
        rounds: layers.len(),
        layer_sizes: layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions as cons;
    use std::collections::VecDeque;
    use std::sync::Arc;

    fn table_of(g: crate::group::Group) -> Arc<GroupTable> {
        g.table().unwrap()
    }

    // independent route to the cover count: breadth-first distances over the
    // Cayley-like graph x → x·k, k ∈ s^L ∪ s^{−L}, tracked separately by
    // parity since the M-fold product set contains exactly the elements
    // with some factorization of length M, and padding changes length by 2
    fn cover_rounds_oracle(t: &GroupTable, s: u32) -> usize {
        let n = t.order();
        let cd = t.classes();
        let mut step: Vec<u32> = cd.classes[cd.class_of[s as usize] as usize]
            .iter()
            .flat_map(|&x| [x, t.inv(x)])
            .collect();
        step.sort_unstable();
        step.dedup();
        // dist[parity][x] = least M of that parity with x ∈ K^{*M}
        let mut dist = [vec![usize::MAX; n], vec![usize::MAX; n]];
        let mut queue = VecDeque::new();
        dist[0][0] = 0;
        queue.push_back((0u32, 0usize));
        while let Some((x, d)) = queue.pop_front() {
            for &k in &step {
                let y = t.mul(x, k);
                let nd = d + 1;
                if dist[nd % 2][y as usize] == usize::MAX {
                    dist[nd % 2][y as usize] = nd;
                    queue.push_back((y, nd));
                }
            }
        }
        // least M such that every element has a factorization of length of
        // the same parity not exceeding M
        (1..=2 * n)
            .find(|&m| (0..n).all(|x| dist[m % 2][x] <= m))
            .expect("simple group must be covered")
    }

    #[test]
    fn lambda_values_on_alt5() {
        let t = table_of(cons::alt(5));
        assert_eq!(lambda_finite(&t, 0).unwrap().value, 0.0);

        let cycle_type = |i: u32| {
            let mut lens: Vec<usize> = t
                .perm(i)
                .unwrap()
                .cycles()
                .iter()
                .map(|c| c.len())
                .filter(|&l| l > 1)
                .collect();
            lens.sort_unstable();
            lens
        };
        let five = (0..60u32).find(|&i| cycle_type(i) == vec![5]).unwrap();
        let v = lambda_finite(&t, five).unwrap();
        assert_eq!((v.class_size, v.group_order), (12, 60));
        assert!((v.value - 12f64.ln() / 60f64.ln()).abs() < 1e-12);
        assert!((v.value - 0.6069).abs() < 5e-4);

        let double = (0..60u32).find(|&i| cycle_type(i) == vec![2, 2]).unwrap();
        let v = lambda_finite(&t, double).unwrap();
        assert_eq!((v.class_size, v.group_order), (15, 60));
        assert!((v.value - 0.6614).abs() < 5e-4);
    }

    #[test]
    fn non_simple_groups_are_rejected() {
        let s4 = table_of(cons::sym(4));
        assert!(lambda_finite(&s4, 1).is_err());
        let c6 = table_of(cons::cyclic(6));
        assert!(lambda_property_report(&c6).is_err());
        assert!(min_conj_cover(&c6, 1).is_err());
    }

    #[test]
    fn property_report_on_alt5_and_psl27() {
        for g in [cons::alt(5), cons::psl2(7).unwrap()] {
            let t = table_of(g);
            let rep = lambda_property_report(&t).unwrap();
            assert!(rep.zero_iff_central);
            assert!(rep.symmetry_ok);
            assert_eq!(rep.pairs_checked, (t.order() as u64).pow(2));
            assert_eq!(rep.subadditivity_violations, 0);
            assert!(rep.min_nontrivial.unwrap() > 0.0);
        }
        // Alt(5): smallest nontrivial class is the 12-element 5-cycle class
        let t = table_of(cons::alt(5));
        let rep = lambda_property_report(&t).unwrap();
        assert!((rep.min_nontrivial.unwrap() - 12f64.ln() / 60f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn prime_cyclic_is_simple_but_flat() {
        // abelian simple group: λ is identically zero and every property
        // holds degenerately; the cover statistic rejects (all central)
        let t = table_of(cons::cyclic(5));
        let rep = lambda_property_report(&t).unwrap();
        assert!(rep.zero_iff_central && rep.symmetry_ok);
        assert_eq!(rep.subadditivity_violations, 0);
        assert!(rep.min_nontrivial.is_none());
        assert!(min_conj_cover(&t, 1).is_err());
    }

    #[test]
    fn cover_rounds_match_oracle() {
        let t = table_of(cons::alt(5));
        let cd = t.classes();
        let mut seen = Vec::new();
        for class in cd.classes.iter().skip(1) {
            let s = class[0];
            let cover = min_conj_cover(&t, s).unwrap();
            assert_eq!(cover.rounds, cover_rounds_oracle(&t, s));
            assert_eq!(*cover.layer_sizes.last().unwrap(), 60);
            seen.push((class.len(), cover.rounds));
        }
        seen.sort_unstable();
        // 5-cycle classes are inverse-closed; their square misses the 15
        // double transpositions (45 elements), so three rounds are needed
        assert_eq!(seen, vec![(12, 3), (12, 3), (15, 2), (20, 2)]);

        let t7 = table_of(cons::psl2(7).unwrap());
        let cd7 = t7.classes();
        let invol = cd7
            .classes
            .iter()
            .map(|c| c[0])
            .find(|&s| s != 0 && t7.mul(s, s) == 0)
            .unwrap();
        let cover = min_conj_cover(&t7, invol).unwrap();
        assert_eq!(cover.rounds, cover_rounds_oracle(&t7, invol));
    }

    #[test]
    fn central_elements_are_rejected() {
        let t = table_of(cons::alt(5));
        assert!(min_conj_cover(&t, 0).is_err());
    }

    #[test]
    fn cover_rounds_do_not_exceed_group_max() {
        // the trend statistic: every class's cover count is at most the
        // worst over the group, and larger λ never does worse than the max
        let t = table_of(cons::alt(5));
        let cd = t.classes();
        let rounds: Vec<usize> = cd
            .classes
            .iter()
            .skip(1)
            .map(|c| min_conj_cover(&t, c[0]).unwrap().rounds)
            .collect();
        let max = *rounds.iter().max().unwrap();
        assert!(rounds.iter().all(|&r| r <= max));
        assert_eq!(max, 3);
    }
}
