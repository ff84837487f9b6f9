use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Perm;
use crate::subgroup::{closure, quotient};
use crate::table::{GroupOps, GroupTable, DEFAULT_TABLE_CAP};

/// Arithmetic for the handful of small fields the projective and linear
/// constructions need. Elements are indices 0..q with 0 = zero, 1 = one.
struct SmallField {
    q: usize,
    add_t: Vec<u8>,
    mul_t: Vec<u8>,
}

impl SmallField {
    fn new(q: usize) -> Result<SmallField> {
        let is_prime = |n: usize| n > 1 && (2..n).all(|d| n % d != 0);
        let (add_t, mul_t): (Vec<u8>, Vec<u8>) = if is_prime(q) {
            let mut add_t = vec![0u8; q * q];
            let mut mul_t = vec![0u8; q * q];
            for a in 0..q {
                for b in 0..q {
                    add_t[a * q + b] = ((a + b) % q) as u8;
                    mul_t[a * q + b] = ((a * b) % q) as u8;
                }
            }
            (add_t, mul_t)
        } else if q == 4 || q == 8 {
            // GF(2^k) with x^2+x+1 resp. x^3+x+1; elements are bit vectors
            let modulus = if q == 4 { 0b111usize } else { 0b1011 };
            let k = if q == 4 { 2 } else { 3 };
            let mut add_t = vec![0u8; q * q];
            let mut mul_t = vec![0u8; q * q];
            for a in 0..q {
                for b in 0..q {
                    add_t[a * q + b] = (a ^ b) as u8;
                    let mut prod = 0usize;
                    for bit in 0..k {
                        if b >> bit & 1 == 1 {
                            prod ^= a << bit;
                        }
                    }
                    for bit in (k..2 * k).rev() {
                        if prod >> bit & 1 == 1 {
                            prod ^= modulus << (bit - k);
                        }
                    }
                    mul_t[a * q + b] = prod as u8;
                }
            }
            (add_t, mul_t)
        } else if q == 9 {
            // F3[i], i^2 = -1; element a0 + 3*a1 represents a0 + a1*i
            let mut add_t = vec![0u8; 81];
            let mut mul_t = vec![0u8; 81];
            for a in 0..9 {
                let (a0, a1) = (a % 3, a / 3);
                for b in 0..9 {
                    let (b0, b1) = (b % 3, b / 3);
                    add_t[a * 9 + b] = ((a0 + b0) % 3 + 3 * ((a1 + b1) % 3)) as u8;
                    let re = (a0 * b0 + 2 * a1 * b1) % 3; // -1 = 2 mod 3
                    let im = (a0 * b1 + a1 * b0) % 3;
                    mul_t[a * 9 + b] = (re + 3 * im) as u8;
                }
            }
            (add_t, mul_t)
        } else {
            return Err(Error::Invalid(format!("unsupported field size {}", q)));
        };
        Ok(SmallField { q, add_t, mul_t })
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add_t[a * self.q + b] as usize
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_t[a * self.q + b] as usize
    }

    fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    fn inv(&self, a: usize) -> usize {
        debug_assert_ne!(a, 0);
        (1..self.q).find(|&b| self.mul(a, b) == 1).unwrap()
    }
}

fn perm(s: &str, degree: usize) -> Perm {
    Perm::from_cycles(s, degree).unwrap()
}

pub fn sym(n: usize) -> Group {
    assert!(n >= 2);
    let cycle: String = (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let gens = if n == 2 {
        vec![perm("(1 2)", 2)]
    } else {
        vec![perm("(1 2)", n), perm(&format!("({})", cycle), n)]
    };
    Group::from_perm_gens(&format!("sym{}", n), n, gens).unwrap()
}

pub fn alt(n: usize) -> Group {
    assert!(n >= 3);
    let gens = if n == 3 {
        vec![perm("(1 2 3)", 3)]
    } else if n % 2 == 1 {
        let cycle: String = (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        vec![perm("(1 2 3)", n), perm(&format!("({})", cycle), n)]
    } else {
        let cycle: String = (2..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        vec![perm("(1 2 3)", n), perm(&format!("({})", cycle), n)]
    };
    Group::from_perm_gens(&format!("alt{}", n), n, gens).unwrap()
}

pub fn cyclic(n: usize) -> Group {
    assert!(n >= 1);
    if n == 1 {
        return Group::from_perm_gens("c1", 1, vec![]).unwrap();
    }
    let cycle: String = (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    Group::from_perm_gens(&format!("c{}", n), n, vec![perm(&format!("({})", cycle), n)]).unwrap()
}

/// Dihedral group of order 2k acting on k points (k >= 3).
pub fn dihedral(k: usize) -> Group {
    assert!(k >= 3);
    let rot: String = (1..=k).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let mut refl_img: Vec<u32> = (0..k as u32).collect();
    for i in 0..k {
        refl_img[i] = ((k - i) % k) as u32;
    }
    let gens = vec![
        perm(&format!("({})", rot), k),
        Perm::from_images(refl_img).unwrap(),
    ];
    Group::from_perm_gens(&format!("dih{}", 2 * k), k, gens).unwrap()
}

pub fn elementary_abelian(p: usize, k: usize) -> Group {
    assert!(k >= 1);
    let degree = p * k;
    let gens: Vec<Perm> = (0..k)
        .map(|b| {
            let pts: String = (b * p + 1..=b * p + p)
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            perm(&format!("({})", pts), degree)
        })
        .collect();
    Group::from_perm_gens(&format!("elab_{}_{}", p, k), degree, gens).unwrap()
}

/// Quaternion group as an explicit table:
/// indices 0..7 = +1, -1, +i, -i, +j, -j, +k, -k.
pub fn q8() -> Group {
    // element = (axis 0..3, sign bit); axis 0 is the scalar 1
    let enc = |axis: usize, sign: usize| axis * 2 + sign;
    let mul_parts = |a1: usize, s1: usize, a2: usize, s2: usize| -> (usize, usize) {
        if a1 == 0 {
            (a2, s1 ^ s2)
        } else if a2 == 0 {
            (a1, s1 ^ s2)
        } else if a1 == a2 {
            (0, s1 ^ s2 ^ 1) // i*i = -1
        } else {
            // i*j = k cyclically; anti-cyclic products flip sign
            let cyclic = matches!((a1, a2), (1, 2) | (2, 3) | (3, 1));
            (6 - a1 - a2, s1 ^ s2 ^ if cyclic { 0 } else { 1 })
        }
    };
    let mut table = vec![0u32; 64];
    for a1 in 0..4 {
        for s1 in 0..2 {
            for a2 in 0..4 {
                for s2 in 0..2 {
                    let (a, s) = mul_parts(a1, s1, a2, s2);
                    table[enc(a1, s1) * 8 + enc(a2, s2)] = enc(a, s) as u32;
                }
            }
        }
    }
    let t = GroupTable::from_raw_table(8, table)
        .unwrap()
        .with_gens(vec![2, 4]); // i and j
    Group::from_table("q8", t)
}

/// Extraspecial group of order 27 and exponent 3 (upper unitriangular 3x3
/// matrices over F3), acting on itself by right multiplication.
pub fn extraspecial_27() -> Group {
    let idx = |a: usize, b: usize, c: usize| a + 3 * b + 9 * c;
    let mult = |x: (usize, usize, usize), y: (usize, usize, usize)| {
        (
            (x.0 + y.0) % 3,
            (x.1 + y.1) % 3,
            (x.2 + y.2 + x.0 * y.1) % 3,
        )
    };
    let gen_perm = |g: (usize, usize, usize)| {
        let mut img = vec![0u32; 27];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let t = mult((a, b, c), g);
                    img[idx(a, b, c)] = idx(t.0, t.1, t.2) as u32;
                }
            }
        }
        Perm::from_images(img).unwrap()
    };
    Group::from_perm_gens(
        "extra27",
        27,
        vec![gen_perm((1, 0, 0)), gen_perm((0, 1, 0))],
    )
    .unwrap()
}

/// Extraspecial group of order 32: central product of two dihedral groups of
/// order 8 over their shared center.
pub fn extraspecial_32() -> Group {
    let d8 = dihedral(4).table().unwrap();
    let prod = GroupTable::direct_product(&d8, &d8);
    let z = *d8.center().iter().find(|&&x| x != 0).unwrap();
    // the diagonal central involution (z, z)
    let zz = z * 8 + z;
    let n = closure(&prod, &[zz]);
    let (q, _) = quotient(&prod, &n, DEFAULT_TABLE_CAP).unwrap();
    debug_assert_eq!(q.order(), 32);
    Group::from_table("extra32", q)
}

/// PSL(2, q) acting on the projective line (q + 1 points; point q is
/// infinity), generated by x -> x+1 and x -> -1/x.
pub fn psl2(q: usize) -> Result<Group> {
    let f = SmallField::new(q)?;
    let inf = q as u32;
    let translation = |c: usize| {
        let mut img: Vec<u32> = (0..=q as u32).collect();
        for x in 0..q {
            img[x] = f.add(x, c) as u32;
        }
        img[q] = inf;
        Perm::from_images(img).unwrap()
    };
    let mut s_img: Vec<u32> = (0..=q as u32).collect();
    s_img[0] = inf;
    s_img[q] = 0;
    for x in 1..q {
        s_img[x] = f.neg(f.inv(x)) as u32;
    }
    // Translations together with x -> -1/x give all unipotents of both
    // triangle types, which generate the group. For prime q the single
    // translation x -> x+1 already yields every translate; for q = 4, 8, 9
    // translation by 1 only walks the prime subfield, so include them all.
    let mut gens = vec![translation(1)];
    if !is_prime(q) {
        for c in 2..q {
            gens.push(translation(c));
        }
    }
    gens.push(Perm::from_images(s_img).unwrap());
    Group::from_perm_gens(&format!("psl2_{}", q), q + 1, gens)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// SL(2, q) acting on the q^2 - 1 nonzero row vectors of F_q^2.
pub fn sl2(q: usize) -> Result<Group> {
    let f = SmallField::new(q)?;
    let n_pts = q * q - 1;
    let pt = |x: usize, y: usize| (x * q + y - 1) as u32; // (0,0) excluded
    // elementary matrices [[1,a],[0,1]] : (x, y) -> (x, x*a + y)
    //                     [[1,0],[a,1]] : (x, y) -> (x + y*a, y)
    let upper = |a: usize| {
        let mut img = vec![0u32; n_pts];
        for x in 0..q {
            for y in 0..q {
                if x == 0 && y == 0 {
                    continue;
                }
                img[pt(x, y) as usize] = pt(x, f.add(f.mul(x, a), y));
            }
        }
        Perm::from_images(img).unwrap()
    };
    let lower = |a: usize| {
        let mut img = vec![0u32; n_pts];
        for x in 0..q {
            for y in 0..q {
                if x == 0 && y == 0 {
                    continue;
                }
                img[pt(x, y) as usize] = pt(f.add(x, f.mul(y, a)), y);
            }
        }
        Perm::from_images(img).unwrap()
    };
    let mut gens = vec![upper(1), lower(1)];
    if q == 9 {
        // add transvections by a field generator outside the prime field
        gens.push(upper(3));
        gens.push(lower(3));
    }
    Group::from_perm_gens(&format!("sl2_{}", q), n_pts, gens)
}

fn shift_block(p: &str, offset: usize, degree: usize) -> Perm {
    // shift the 1-based points of cycle string p by offset
    let base = Perm::from_cycles(p, degree).unwrap();
    let mut img: Vec<u32> = (0..degree as u32).collect();
    for (i, &v) in base.images().iter().enumerate() {
        if i as u32 != v {
            img[i + offset] = v + offset as u32;
        }
    }
    Perm::from_images(img).unwrap()
}

/// Alt(5) x Alt(5) on two 5-point blocks.
pub fn alt5_sq() -> Group {
    let g = vec![
        shift_block("(1 2 3)", 0, 10),
        shift_block("(1 2 3 4 5)", 0, 10),
        shift_block("(1 2 3)", 5, 10),
        shift_block("(1 2 3 4 5)", 5, 10),
    ];
    Group::from_perm_gens("alt5_sq", 10, g).unwrap()
}

/// (Alt(5) x Alt(5)) : 2 with the coordinate swap on top.
pub fn alt5_sq_swap() -> Group {
    let g = vec![
        shift_block("(1 2 3)", 0, 10),
        shift_block("(1 2 3 4 5)", 0, 10),
        perm("(1 6)(2 7)(3 8)(4 9)(5 10)", 10),
    ];
    Group::from_perm_gens("alt5_sq_swap", 10, g).unwrap()
}

/// (Alt(5))^3 : 3 with a block rotation on top; order 648000, permutation
/// backend only.
pub fn alt5_cubed_rot() -> Group {
    let g = vec![
        shift_block("(1 2 3)", 0, 15),
        shift_block("(1 2 3 4 5)", 0, 15),
        perm("(1 6 11)(2 7 12)(3 8 13)(4 9 14)(5 10 15)", 15),
    ];
    Group::from_perm_gens("alt5_cubed_rot", 15, g).unwrap()
}

pub fn alt5_times_c6() -> Group {
    let g = vec![
        shift_block("(1 2 3)", 0, 11),
        shift_block("(1 2 3 4 5)", 0, 11),
        perm("(6 7 8 9 10 11)", 11),
    ];
    Group::from_perm_gens("alt5_x_c6", 11, g).unwrap()
}

pub fn sym3_times_c4() -> Group {
    let g = vec![
        perm("(1 2)", 7),
        perm("(1 2 3)", 7),
        perm("(4 5 6 7)", 7),
    ];
    Group::from_perm_gens("sym3_x_c4", 7, g).unwrap()
}
