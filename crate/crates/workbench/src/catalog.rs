//! The benchmark catalog: one constructed group per entry, tagged with the
//! structural properties the suites filter on. Construction is verified
//! against the expected order before an entry is admitted.

use groupbench_core::constructions as cons;
use groupbench_core::{Error, Group, Result};
use serde::Serialize;

#[derive(Clone, Copy, Default, Serialize)]
pub struct Tags {
    /// non-abelian simple
    pub simple: bool,
    /// perfect central extension of a simple group (includes the simple ones)
    pub quasisimple: bool,
    pub soluble: bool,
    pub nilpotent: bool,
    /// semisimple normal base with a nontrivial permutation action on its factors
    pub semisimple_action: bool,
}

pub struct CatalogEntry {
    pub name: String,
    pub group: Group,
    pub expected_order: u128,
    pub tags: Tags,
}

impl CatalogEntry {
    fn checked(group: Group, expected_order: u128, tags: Tags) -> Result<CatalogEntry> {
        let got = group.order();
        if got != expected_order {
            return Err(Error::Invalid(format!(
                "catalog entry {}: constructed order {} != expected {}",
                group.name, got, expected_order
            )));
        }
        Ok(CatalogEntry {
            name: group.name.clone(),
            group,
            expected_order,
            tags,
        })
    }
}

fn simple_tags() -> Tags {
    Tags {
        simple: true,
        quasisimple: true,
        ..Tags::default()
    }
}

fn soluble_tags(nilpotent: bool) -> Tags {
    Tags {
        soluble: true,
        nilpotent,
        ..Tags::default()
    }
}

/// Factorial, exact in u128 for the range used here.
fn fact(n: u128) -> u128 {
    (1..=n).product()
}

fn psl2_order(q: u128) -> u128 {
    let raw = q * (q * q - 1);
    if q % 2 == 0 {
        raw
    } else {
        raw / 2
    }
}

/// Build the full catalog. Every entry's constructed order is checked against
/// the expected order; a mismatch aborts the build with an error naming the
/// entry.
pub fn catalog_build() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();

    for n in 3..=7u128 {
        out.push(CatalogEntry::checked(
            cons::sym(n as usize),
            fact(n),
            // Sym(3), Sym(4) are soluble; larger ones carry no tag
            soluble_if(n <= 4),
        )?);
    }
    for n in 4..=7u128 {
        let tags = if n >= 5 {
            simple_tags()
        } else {
            soluble_tags(false)
        };
        out.push(CatalogEntry::checked(cons::alt(n as usize), fact(n) / 2, tags)?);
    }

    for q in [4u128, 5, 7, 8, 9, 11, 13] {
        out.push(CatalogEntry::checked(
            cons::psl2(q as usize)?,
            psl2_order(q),
            simple_tags(),
        )?);
    }
    for q in [5u128, 7, 9] {
        out.push(CatalogEntry::checked(
            cons::sl2(q as usize)?,
            q * (q * q - 1),
            Tags {
                quasisimple: true,
                ..Tags::default()
            },
        )?);
    }

    for k in 3..=32u128 {
        // order 2k; nilpotent exactly when k is a power of two
        out.push(CatalogEntry::checked(
            cons::dihedral(k as usize),
            2 * k,
            soluble_tags(k.is_power_of_two()),
        )?);
    }

    out.push(CatalogEntry::checked(cons::q8(), 8, soluble_tags(true))?);
    out.push(CatalogEntry::checked(cons::extraspecial_27(), 27, soluble_tags(true))?);
    out.push(CatalogEntry::checked(cons::extraspecial_32(), 32, soluble_tags(true))?);

    for (p, k) in [(2u128, 1usize), (3, 1), (5, 1), (2, 3), (3, 2)] {
        out.push(CatalogEntry::checked(
            cons::elementary_abelian(p as usize, k),
            p.pow(k as u32),
            soluble_tags(true),
        )?);
    }

    out.push(CatalogEntry::checked(cons::alt5_sq(), 3600, Tags::default())?);
    out.push(CatalogEntry::checked(
        cons::alt5_sq_swap(),
        7200,
        Tags {
            semisimple_action: true,
            ..Tags::default()
        },
    )?);
    // order 648000: past the table cap, served by the permutation backend only
    out.push(CatalogEntry::checked(
        cons::alt5_cubed_rot(),
        648_000,
        Tags {
            semisimple_action: true,
            ..Tags::default()
        },
    )?);
    out.push(CatalogEntry::checked(cons::alt5_times_c6(), 360, Tags::default())?);
    out.push(CatalogEntry::checked(cons::sym3_times_c4(), 24, soluble_tags(false))?);

    Ok(out)
}

fn soluble_if(yes: bool) -> Tags {
    if yes {
        soluble_tags(false)
    } else {
        Tags::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds_with_verified_orders() {
        let cat = catalog_build().unwrap();
        assert!(cat.len() >= 50);
        for e in &cat {
            assert_eq!(e.group.order(), e.expected_order, "{}", e.name);
        }
        // spot-check the required members
        let find = |n: &str| cat.iter().find(|e| e.name == n).unwrap();
        assert_eq!(find("psl2_7").expected_order, 168);
        assert_eq!(find("alt5_cubed_rot").expected_order, 648_000);
        assert!(!find("alt5_cubed_rot").group.has_table());
        assert_eq!(find("elab_2_1").expected_order, 2);
        assert!(find("alt7").tags.simple);
        assert!(find("sl2_5").tags.quasisimple && !find("sl2_5").tags.simple);
        assert!(find("dih16").tags.nilpotent && !find("dih12").tags.nilpotent);
    }

    #[test]
    fn no_duplicate_names() {
        let cat = catalog_build().unwrap();
        let mut names: Vec<&str> = cat.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), cat.len());
    }
}
