//! Exact mixed partial derivatives of 1/r.
//!
//! Every derivative has the form ∂_x^{px} ∂_y^{py} ∂_z^{pz} (1/r) =
//! P(x, y, z) / r^{2N+1} with N = px+py+pz and P a homogeneous
//! degree-N polynomial with integer coefficients. The recursion
//! ∂_x [P/r^{2N+1}] = [r² ∂_x P - (2N+1) x P] / r^{2N+3} stays in
//! integer arithmetic, so no floating-point cancellation enters the
//! coefficients.

use crate::vec3::Vec3;
use std::collections::BTreeMap;

type Exponents = (u32, u32, u32);

/// Homogeneous integer-coefficient polynomial (monomial -> coefficient).
type IntPoly = BTreeMap<Exponents, i128>;

fn add_term(poly: &mut IntPoly, key: Exponents, c: i128) {
    if c == 0 {
        return;
    }
    let e = poly.entry(key).or_insert(0);
    *e = e.checked_add(c).expect("derivative coefficient overflow");
    if *e == 0 {
        poly.remove(&key);
    }
}

/// Apply one ∂ along `axis` to a level-N numerator polynomial.
fn differentiate(poly: &IntPoly, order: u32, axis: usize) -> IntPoly {
    let mut out = IntPoly::new();
    let k = (2 * order + 1) as i128;
    for (&(i, j, l), &c) in poly {
        let e = [i, j, l];
        // r² ∂_axis P
        if e[axis] > 0 {
            let dc = c
                .checked_mul(e[axis] as i128)
                .expect("coefficient overflow");
            let mut base = e;
            base[axis] -= 1;
            for t in 0..3 {
                let mut m = base;
                m[t] += 2;
                add_term(&mut out, (m[0], m[1], m[2]), dc);
            }
        }
        // -(2N+1) x_axis P
        let mut m = e;
        m[axis] += 1;
        add_term(&mut out, (m[0], m[1], m[2]), -k * c);
    }
    out
}

/// Table of ∂^p (1/r) numerator polynomials for all |p| <= max_order.
pub struct InverseRadialDerivs {
    max_order: u32,
    polys: BTreeMap<Exponents, IntPoly>,
}

impl InverseRadialDerivs {
    pub fn new(max_order: u32) -> Self {
        let mut polys = BTreeMap::new();
        let mut unity = IntPoly::new();
        unity.insert((0, 0, 0), 1);
        polys.insert((0u32, 0u32, 0u32), unity);
        for order in 1..=max_order {
            for px in 0..=order {
                for py in 0..=(order - px) {
                    let pz = order - px - py;
                    // derive from the parent along the first nonzero axis
                    let (parent, axis) = if px > 0 {
                        ((px - 1, py, pz), 0)
                    } else if py > 0 {
                        ((px, py - 1, pz), 1)
                    } else {
                        ((px, py, pz - 1), 2)
                    };
                    let p = differentiate(&polys[&parent], order - 1, axis);
                    polys.insert((px, py, pz), p);
                }
            }
        }
        InverseRadialDerivs { max_order, polys }
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// Numerator polynomial value P(r) such that
    /// ∂^p (1/r) = P(r) / r^{2|p|+1}. Finite everywhere, including r = 0.
    pub fn numerator(&self, p: Exponents, r: Vec3) -> f64 {
        let poly = &self.polys[&p];
        let mut acc = 0.0;
        for (&(i, j, k), &c) in poly {
            acc += c as f64 * r.x.powi(i as i32) * r.y.powi(j as i32) * r.z.powi(k as i32);
        }
        acc
    }

    /// ∂_x^{px} ∂_y^{py} ∂_z^{pz} (1/r) at r != 0.
    pub fn eval(&self, p: Exponents, r: Vec3) -> f64 {
        let order = p.0 + p.1 + p.2;
        let rn = r.norm();
        self.numerator(p, r) / rn.powi(2 * order as i32 + 1)
    }

    /// The numerator as an f64-coefficient [`crate::poly::Poly3`]
    /// (used for analytic moments of the Cartesian mean square radii).
    pub fn numerator_poly(&self, p: Exponents) -> crate::poly::Poly3 {
        let mut out = crate::poly::Poly3::zero();
        for (&k, &c) in &self.polys[&p] {
            out.add_term(k, num_complex::Complex64::new(c as f64, 0.0));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_closed_forms() {
        let t = InverseRadialDerivs::new(2);
        let r = Vec3::new(0.0, 0.0, 2.0);
        assert!((t.eval((0, 0, 0), r) - 0.5).abs() < 1e-15);
        // ∂_z(1/r) = -z/r³
        let r1 = Vec3::new(0.0, 0.0, 1.0);
        assert!((t.eval((0, 0, 1), r1) - (-1.0)).abs() < 1e-15);
        // ∂_z²(1/r) = (3z² - r²)/r⁵ = 2/r³ on the z axis
        assert!((t.eval((0, 0, 2), r1) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn finite_difference_oracle() {
        let t = InverseRadialDerivs::new(3);
        let r = Vec3::new(1.0, 1.0, 1.0);
        let h = 1e-3;
        let inv = |v: Vec3| 1.0 / v.norm();
        // ∂_x²
        let fd = (inv(r + Vec3::new(h, 0.0, 0.0)) - 2.0 * inv(r) + inv(r - Vec3::new(h, 0.0, 0.0)))
            / (h * h);
        assert!((t.eval((2, 0, 0), r) - fd).abs() < 1e-6);
        // mixed ∂_x ∂_y
        let fd = (inv(r + Vec3::new(h, h, 0.0))
            - inv(r + Vec3::new(h, -h, 0.0))
            - inv(r + Vec3::new(-h, h, 0.0))
            + inv(r + Vec3::new(-h, -h, 0.0)))
            / (4.0 * h * h);
        assert!((t.eval((1, 1, 0), r) - fd).abs() < 1e-6);
    }

    #[test]
    fn laplacian_vanishes_away_from_origin() {
        let t = InverseRadialDerivs::new(6);
        for &r in &[Vec3::new(0.4, -0.2, 0.8), Vec3::new(1.5, 2.0, -0.3)] {
            for base in [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 0, 1), (0, 3, 1)] {
                let lap = t.eval((base.0 + 2, base.1, base.2), r)
                    + t.eval((base.0, base.1 + 2, base.2), r)
                    + t.eval((base.0, base.1, base.2 + 2), r);
                let scale = t.eval(base, r).abs().max(1.0 / r.norm());
                assert!(lap.abs() < 1e-10 * scale, "Δ∂^{base:?}(1/r) = {lap}");
            }
        }
    }

    #[test]
    fn high_order_build_stays_in_range() {
        // order 20 is what l_max = 10 forms need; must not overflow i128
        let t = InverseRadialDerivs::new(20);
        let v = t.eval((8, 6, 6), Vec3::new(0.9, -1.1, 1.3));
        assert!(v.is_finite());
    }
}
