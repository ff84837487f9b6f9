//! The compact case, specialized to SU(2). Elements are unit quaternions
//! w + xi + yj + zk, equivalent to the unitary matrices ((a, b), (−b̄, ā))
//! with a = w + ix, b = y + iz. A conjugacy class is a trace level set
//! {2 cos γ}, and the normalized class-size measure is λ(g) = 2γ/π after
//! replacing g by −g when γ > π/2. The product witness constructs, for any
//! target h and any N with N·γ ≥ acos(tr(h)/2), a list of N conjugates of g
//! whose product is h: each step bisects a conjugating-axis angle so that
//! the running product's trace lands on the next waypoint, and one final
//! global conjugation rotates the product's axis onto the target's.

use serde::Serialize;

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;
const BISECT_STEPS: usize = 200;
/// verified accuracy of a witness product, in operator norm
pub const WITNESS_TOL: f64 = 1e-8;

/// A point of SU(2) as a unit quaternion [w, x, y, z].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Su2Element {
    pub q: [f64; 4],
}

fn norm4(q: &[f64; 4]) -> f64 {
    q.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl Su2Element {
    /// Requires the coordinates to be unit length within 10⁻¹².
    pub fn new(q: [f64; 4]) -> Result<Su2Element> {
        if (norm4(&q) - 1.0).abs() > UNIT_TOL {
            return Err(Error::Invalid("quaternion is not unit length".into()));
        }
        Ok(Su2Element { q })
    }

    /// Accepts mildly drifted input and rescales it to unit length.
    pub fn renormalized(q: [f64; 4]) -> Result<Su2Element> {
        let n = norm4(&q);
        if !(0.5..=2.0).contains(&n) {
            return Err(Error::Invalid("quaternion is far from unit length".into()));
        }
        Ok(Su2Element {
            q: [q[0] / n, q[1] / n, q[2] / n, q[3] / n],
        })
    }

    pub fn identity() -> Su2Element {
        Su2Element {
            q: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// cos(gamma) + sin(gamma)·â for a unit axis â.
    pub fn from_scalar_axis(gamma: f64, axis: [f64; 3]) -> Result<Su2Element> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n < 1e-9 {
            return Err(Error::Invalid("zero rotation axis".into()));
        }
        let (s, c) = gamma.sin_cos();
        Su2Element::renormalized([c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n])
    }

    pub fn mul(&self, o: &Su2Element) -> Su2Element {
        let [w1, x1, y1, z1] = self.q;
        let [w2, x2, y2, z2] = o.q;
        Su2Element {
            q: [
                w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
            ],
        }
    }

    pub fn inverse(&self) -> Su2Element {
        let [w, x, y, z] = self.q;
        Su2Element { q: [w, -x, -y, -z] }
    }

    pub fn neg(&self) -> Su2Element {
        let [w, x, y, z] = self.q;
        Su2Element {
            q: [-w, -x, -y, -z],
        }
    }

    /// s · self · s⁻¹.
    pub fn conj_by(&self, s: &Su2Element) -> Su2Element {
        s.mul(self).mul(&s.inverse())
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.q[0]
    }

    /// The rotation angle γ ∈ [0, π] with trace = 2 cos γ.
    pub fn angle(&self) -> f64 {
        self.q[0].clamp(-1.0, 1.0).acos()
    }

    pub fn vector_part(&self) -> [f64; 3] {
        [self.q[1], self.q[2], self.q[3]]
    }

    /// Euclidean distance of the coordinate vectors; this equals the
    /// operator-norm distance of the corresponding unitary matrices.
    pub fn dist(&self, o: &Su2Element) -> f64 {
        let d = [
            self.q[0] - o.q[0],
            self.q[1] - o.q[1],
            self.q[2] - o.q[2],
            self.q[3] - o.q[3],
        ];
        d.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// The matrix ((a, b), (−b̄, ā)) as rows of (re, im) pairs.
    pub fn to_matrix(&self) -> [[(f64, f64); 2]; 2] {
        let [w, x, y, z] = self.q;
        [[(w, x), (y, z)], [(-y, z), (w, -x)]]
    }

    /// λ(g) = 2γ/π for γ ≤ π/2, else 2(π−γ)/π: the value is insensitive to
    /// the sign of g, matching the replace-g-by-−g normalization.
    pub fn lambda(&self) -> f64 {
        let gamma = self.angle();
        let g = gamma.min(std::f64::consts::PI - gamma);
        2.0 * g / std::f64::consts::PI
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = norm3(v);
    [v[0] / n, v[1] / n, v[2] / n]
}

// any unit vector orthogonal to the unit vector u
fn orthogonal_unit(u: [f64; 3]) -> [f64; 3] {
    let basis = if u[0].abs() <= u[1].abs() && u[0].abs() <= u[2].abs() {
        [1.0, 0.0, 0.0]
    } else if u[1].abs() <= u[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    normalize3(cross(u, basis))
}

// the rotation s whose 3-space action takes the unit vector `from` to `to`
fn vector_aligner(from: [f64; 3], to: [f64; 3]) -> Su2Element {
    let c = (from[0] * to[0] + from[1] * to[1] + from[2] * to[2]).clamp(-1.0, 1.0);
    if c >= 1.0 - 1e-15 {
        return Su2Element::identity();
    }
    let axis = if c <= -1.0 + 1e-15 {
        orthogonal_unit(from)
    } else {
        normalize3(cross(from, to))
    };
    let half = 0.5 * c.acos();
    let (s, co) = half.sin_cos();
    Su2Element {
        q: [co, s * axis[0], s * axis[1], s * axis[2]],
    }
}

/// A verified factorization of `target` into conjugates of one element.
#[derive(Clone, Debug, Serialize)]
pub struct Su2Witness {
    pub conjugates: Vec<Su2Element>,
    /// λ of the base element after sign normalization
    pub epsilon: f64,
    /// largest deviation of a conjugate's trace from the base trace
    pub max_trace_dev: f64,
    /// operator-norm distance of the product from the target
    pub product_error: f64,
}

/// Write `h` as a product of exactly `n` conjugates of `g`. Feasible
/// whenever λ(g) = ε > 0 and n ≥ ⌈2/ε⌉ (then n·γ ≥ π covers every trace);
/// smaller n works when the target's own trace angle is within n·γ. The
/// returned conjugates are re-multiplied and the product is checked against
/// `h` to within 10⁻⁸ in operator norm.
pub fn su2_product_witness(g: &Su2Element, h: &Su2Element, n: usize) -> Result<Su2Witness> {
    if n == 0 {
        return Err(Error::Invalid("need at least one factor".into()));
    }
    let g = Su2Element::renormalized(g.q)?;
    let h = Su2Element::renormalized(h.q)?;
    let epsilon = g.lambda();
    if epsilon < 1e-9 {
        return Err(Error::Hypothesis(
            "base element is ±identity: its class cannot generate".into(),
        ));
    }

    // normalize the sign so the working angle is in (0, π/2]; conjugates of
    // −g are negated conjugates of g, so the working target absorbs (−1)ⁿ
    let flip = g.angle() > std::f64::consts::FRAC_PI_2;
    let gw = if flip { g.neg() } else { g };
    let hw = if flip && n % 2 == 1 { h.neg() } else { h };
    let gamma = gw.angle();
    let theta_h = hw.angle();

    if n == 1 {
        if (theta_h - gamma).abs() > 1e-9 {
            return Err(Error::Hypothesis(
                "a single conjugate can only reach the base trace".into(),
            ));
        }
    } else if theta_h > n as f64 * gamma + 1e-12 {
        return Err(Error::Hypothesis(
            "target trace angle exceeds n·γ: too few factors".into(),
        ));
    }

    // waypoints for the running product's trace angle: start at γ (forced),
    // end at the target angle, and keep intermediate stops inside
    // [γ, π−γ] where every step of size ≤ γ is realizable
    let mut waypoints = vec![gamma];
    for m in 1..n {
        let t = gamma + (theta_h - gamma) * m as f64 / (n as f64 - 1.0);
        waypoints.push(if m + 1 == n {
            theta_h
        } else {
            t.clamp(gamma, std::f64::consts::PI - gamma)
        });
    }

    let mut conjugates = vec![gw];
    let mut p = gw;
    for &target in waypoints.iter().take(n - 1).skip(1) {
        // conjugates of gw are cos γ + sin γ·v̂; with v̂ at angle φ from the
        // running product's axis, the next trace is
        // 2(cos θ_p cos γ − sin θ_p sin γ cos φ), monotone in φ
        let u = normalize3(p.vector_part());
        let w = orthogonal_unit(u);
        let theta_p = p.angle();
        let want = target.cos();
        let f = |phi: f64| {
            theta_p.cos() * gamma.cos() - theta_p.sin() * gamma.sin() * phi.cos()
        };
        let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
        for _ in 0..BISECT_STEPS {
            let mid = 0.5 * (lo + hi);
            if f(mid) < want {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let phi = 0.5 * (lo + hi);
        if (f(phi) - want).abs() > 1e-9 {
            return Err(Error::NoConvergence(
                "bisection could not reach the waypoint trace".into(),
            ));
        }
        let (sp, cp) = phi.sin_cos();
        let axis = [
            cp * u[0] + sp * w[0],
            cp * u[1] + sp * w[1],
            cp * u[2] + sp * w[2],
        ];
        let c = Su2Element::from_scalar_axis(gamma, axis)?;
        conjugates.push(c);
        p = Su2Element::renormalized(p.mul(&c).q)?;
    }

    if n == 1 {
        // a lone conjugate: rotate the base element's axis onto the target's
        let vp = p.vector_part();
        let vh = hw.vector_part();
        let s = if norm3(vp) < 1e-9 || norm3(vh) < 1e-9 {
            Su2Element::identity()
        } else {
            vector_aligner(normalize3(vp), normalize3(vh))
        };
        conjugates[0] = conjugates[0].conj_by(&s);
    } else {
        // last factor taken exactly as p⁻¹·target, after rotating p's axis
        // so that this quotient has the base element's trace; the product
        // is then exact and all numeric error sits in the trace deviation
        let vp = p.vector_part();
        let vh = hw.vector_part();
        let (np, nh) = (norm3(vp), norm3(vh));
        let num = gamma.cos() - p.q[0] * hw.q[0];
        let s = if np < 1e-12 {
            Su2Element::identity()
        } else if nh < 1e-15 {
            // target is ±identity: any axis gives the same quotient trace
            Su2Element::identity()
        } else {
            let ang = (num / (np * nh)).clamp(-1.0, 1.0).acos();
            let uh = normalize3(vh);
            let wh = orthogonal_unit(uh);
            let (sa, ca) = ang.sin_cos();
            let tgt = [
                ca * uh[0] + sa * wh[0],
                ca * uh[1] + sa * wh[1],
                ca * uh[2] + sa * wh[2],
            ];
            vector_aligner(normalize3(vp), tgt)
        };
        for c in &mut conjugates {
            *c = c.conj_by(&s);
        }
        p = Su2Element::renormalized(p.conj_by(&s).q)?;
        let last = Su2Element::renormalized(p.inverse().mul(&hw).q)?;
        conjugates.push(last);
    }
    if flip {
        for c in &mut conjugates {
            *c = c.neg();
        }
    }

    let mut prod = Su2Element::identity();
    let mut max_trace_dev = 0.0f64;
    for c in &conjugates {
        prod = prod.mul(c);
        max_trace_dev = max_trace_dev.max((c.trace() - g.trace()).abs());
    }
    let product_error = prod.dist(&h);
    if product_error > WITNESS_TOL || max_trace_dev > 1e-9 {
        return Err(Error::NoConvergence(format!(
            "witness verification failed: product error {:.3e}, trace deviation {:.3e}",
            product_error, max_trace_dev
        )));
    }
    Ok(Su2Witness {
        conjugates,
        epsilon,
        max_trace_dev,
        product_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use std::f64::consts::PI;

    fn random_unit(rng: &mut rand_chacha::ChaCha8Rng) -> Su2Element {
        loop {
            let q = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = norm4(&q);
            if n > 0.5 && n <= 1.0 {
                return Su2Element::renormalized(q).unwrap();
            }
        }
    }

    #[test]
    fn matrix_realization_is_faithful() {
        let mut rng = crate::rng::substream(3, "su2-mat", 0);
        let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let cadd = |a: (f64, f64), b: (f64, f64)| (a.0 + b.0, a.1 + b.1);
        for _ in 0..200 {
            let p = random_unit(&mut rng);
            let q = random_unit(&mut rng);
            let (mp, mq) = (p.to_matrix(), q.to_matrix());
            // row constraint |a|² + |b|² = 1 and trace = 2w
            let a = mp[0][0];
            let b = mp[0][1];
            assert!((a.0 * a.0 + a.1 * a.1 + b.0 * b.0 + b.1 * b.1 - 1.0).abs() < 1e-12);
            assert!((mp[0][0].0 + mp[1][1].0 - p.trace()).abs() < 1e-12);
            // multiplication carries over to the matrices
            let prod = p.mul(&q).to_matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let want = cadd(cmul(mp[i][0], mq[0][j]), cmul(mp[i][1], mq[1][j]));
                    assert!((prod[i][j].0 - want.0).abs() < 1e-12);
                    assert!((prod[i][j].1 - want.1).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lambda_is_class_and_inverse_invariant() {
        let mut rng = crate::rng::substream(5, "su2-lam", 0);
        for _ in 0..500 {
            let g = random_unit(&mut rng);
            let s = random_unit(&mut rng);
            let l = g.lambda();
            assert!((0.0..=1.0).contains(&l));
            assert!((g.inverse().lambda() - l).abs() < 1e-12);
            assert!((g.conj_by(&s).lambda() - l).abs() < 1e-12);
            assert!((g.neg().lambda() - l).abs() < 1e-12);
        }
        assert_eq!(Su2Element::identity().lambda(), 0.0);
        assert!((Su2Element::from_scalar_axis(PI / 2.0, [0.0, 0.0, 1.0])
            .unwrap()
            .lambda()
            - 1.0)
            .abs()
            < 1e-12);
    }

    #[test]
    fn quarter_turn_witnesses_random_targets() {
        // trace √2 means γ = π/4 and ε = 1/2, so four conjugates reach
        // every target
        let g = Su2Element::from_scalar_axis(PI / 4.0, [1.0, 0.0, 0.0]).unwrap();
        assert!((g.trace() - 2f64.sqrt()).abs() < 1e-12);
        assert!((g.lambda() - 0.5).abs() < 1e-12);
        let mut rng = crate::rng::substream(7, "su2-wit", 0);
        for _ in 0..100 {
            let h = random_unit(&mut rng);
            let w = su2_product_witness(&g, &h, 4).unwrap();
            assert!(w.product_error <= WITNESS_TOL);
            let mut p = Su2Element::identity();
            for c in &w.conjugates {
                assert!((c.trace() - g.trace()).abs() < 1e-9);
                p = p.mul(c);
            }
            assert!(p.dist(&h) <= WITNESS_TOL);
        }
    }

    #[test]
    fn witness_handles_obtuse_base_elements() {
        // γ > π/2: the −g normalization kicks in, with the sign pushed into
        // the target for odd n
        let g = Su2Element::from_scalar_axis(0.75 * PI, [0.0, 1.0, 0.0]).unwrap();
        assert!((g.lambda() - 0.5).abs() < 1e-12);
        let mut rng = crate::rng::substream(11, "su2-obtuse", 0);
        for n in [4usize, 5] {
            for _ in 0..50 {
                let h = random_unit(&mut rng);
                let w = su2_product_witness(&g, &h, n).unwrap();
                assert!(w.product_error <= WITNESS_TOL);
            }
        }
    }

    #[test]
    fn single_factor_is_the_element_itself() {
        let g = Su2Element::from_scalar_axis(0.3, [0.0, 0.0, 1.0]).unwrap();
        let w = su2_product_witness(&g, &g, 1).unwrap();
        assert_eq!(w.conjugates.len(), 1);
        assert!(w.conjugates[0].dist(&g) < 1e-9);
        // a conjugate of g with the same trace also works via one factor
        let s = Su2Element::from_scalar_axis(1.1, [1.0, 2.0, 0.5]).unwrap();
        let h = g.conj_by(&s);
        let w = su2_product_witness(&g, &h, 1).unwrap();
        assert!(w.conjugates[0].dist(&h) < 1e-8);
        // but no single conjugate reaches a different trace
        let far = Su2Element::from_scalar_axis(1.2, [0.0, 0.0, 1.0]).unwrap();
        assert!(su2_product_witness(&g, &far, 1).is_err());
    }

    #[test]
    fn identity_and_sign_guards() {
        let id = Su2Element::identity();
        let h = Su2Element::from_scalar_axis(0.4, [1.0, 0.0, 0.0]).unwrap();
        assert!(su2_product_witness(&id, &h, 4).is_err());
        assert!(su2_product_witness(&id.neg(), &h, 4).is_err());
        // identity and −identity are reachable targets for a generic base
        let g = Su2Element::from_scalar_axis(PI / 4.0, [0.0, 1.0, 0.0]).unwrap();
        for target in [id, id.neg()] {
            let w = su2_product_witness(&g, &target, 4).unwrap();
            assert!(w.product_error <= WITNESS_TOL);
        }
    }

    #[test]
    fn too_few_factors_is_an_error() {
        let g = Su2Element::from_scalar_axis(PI / 4.0, [1.0, 0.0, 0.0]).unwrap();
        let minus_one = Su2Element::identity().neg();
        // reaching trace −2 needs θ = π ≤ n·γ, so n = 2 or 3 cannot work
        assert!(su2_product_witness(&g, &minus_one, 2).is_err());
        assert!(su2_product_witness(&g, &minus_one, 3).is_err());
        assert!(su2_product_witness(&g, &minus_one, 4).is_ok());
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(Su2Element::new([1.0, 1.0, 0.0, 0.0]).is_err());
        assert!(Su2Element::new([0.5, 0.5, 0.5, 0.5]).is_ok());
        assert!(Su2Element::renormalized([0.0, 0.0, 0.0, 0.0]).is_err());
        let g = Su2Element::from_scalar_axis(0.5, [1.0, 0.0, 0.0]).unwrap();
        assert!(su2_product_witness(&g, &g, 0).is_err());
    }
}
