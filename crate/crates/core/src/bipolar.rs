//! Four equivalent bipolar expansions of 1/|b - a - R|, the addition
//! theorem of the irregular solid harmonics, and the Rayleigh-expansion
//! check in Fourier space.
//!
//! Pointwise evaluation keeps only the n = n' = 0 sector: away from
//! R = 0 every higher radial term is a derivative of δ(R) and vanishes
//! identically. The contact content those terms carry is exercised under
//! integrals by the energy routes, never summed pointwise here.

use crate::deriv::InverseRadialDerivs;
use crate::error::{Error, Result};
use crate::poly::solid_harmonic_poly;
use crate::specfun::{
    double_factorial, factorial, gaunt, irregular_solid_harmonic, spherical_bessel_rayleigh,
    AngularIndex, GauntTable, SphericalHarmonicTable,
};
use crate::vec3::Vec3;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Summation cutoffs: l_max caps both multipole orders; n_max caps the
/// radial (contact) order and is meaningful only under integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub l_max: u32,
    pub n_max: u32,
}

impl Truncation {
    pub fn new(l_max: u32, n_max: u32) -> Self {
        Truncation { l_max, n_max }
    }
}

/// Two-center geometry: `b` points inside distribution 1 (from the
/// origin), `a` inside distribution 2 (from its own center), and
/// `separation` joins the two centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BipolarGeometry {
    pub b: Vec3,
    pub a: Vec3,
    pub separation: Vec3,
}

impl BipolarGeometry {
    pub fn new(b: Vec3, a: Vec3, separation: Vec3) -> Self {
        BipolarGeometry { b, a, separation }
    }

    /// True iff |R| > |a| + |b|: the region where the classical series
    /// converges pointwise. Outside it the evaluators still return the
    /// analytic-continuation value of the truncated sum.
    pub fn nonoverlap(&self) -> bool {
        self.separation.norm() > self.a.norm() + self.b.norm()
    }

    /// Exact 1/|b - a - R|: the oracle every expansion form is checked
    /// against.
    pub fn inverse_distance_direct(&self) -> Result<f64> {
        let d = (self.b - self.a - self.separation).norm();
        if d == 0.0 {
            return Err(Error::Singularity("coincident field points".into()));
        }
        Ok(1.0 / d)
    }
}

fn check_separation(g: &BipolarGeometry) -> Result<f64> {
    let r = g.separation.norm();
    if r == 0.0 {
        return Err(Error::Singularity(
            "bipolar expansion is evaluated pointwise only for R != 0".into(),
        ));
    }
    Ok(r)
}

/// Spherical-harmonic table for a source vector, falling back to +z for
/// the zero vector (where only l = 0 survives through the b^l weight).
fn harmonic_table(l_max: u32, v: Vec3) -> Result<SphericalHarmonicTable> {
    let dir = if v.is_zero() {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        v
    };
    SphericalHarmonicTable::new(l_max, dir)
}

/// One (l, m, l', m') term of the first expansion form.
pub fn form1_term(g: &BipolarGeometry, l: u32, m: i32, lp: u32, mp: i32) -> Result<Complex64> {
    check_separation(g)?;
    let yb = crate::specfun::sph_harm(
        AngularIndex::new(l, m)?,
        if g.b.is_zero() {
            Vec3::new(0.0, 0.0, 1.0)
        } else {
            g.b
        },
    )?;
    let ya = crate::specfun::sph_harm(
        AngularIndex::new(lp, mp)?,
        if g.a.is_zero() {
            Vec3::new(0.0, 0.0, 1.0)
        } else {
            g.a
        },
    )?;
    let bl = if l == 0 {
        1.0
    } else {
        g.b.norm().powi(l as i32)
    };
    let al = if lp == 0 {
        1.0
    } else {
        g.a.norm().powi(lp as i32)
    };
    let sign = if lp.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pref = sign * (4.0 * PI) * (4.0 * PI) * bl * al
        / (double_factorial(2 * l as i64 + 1)? * double_factorial(2 * lp as i64 + 1)?);
    let product = gaunt(l, m, lp, mp)?
        * irregular_solid_harmonic(AngularIndex::new(l + lp, m + mp)?, g.separation)?;
    Ok(yb.conj() * ya.conj() * product * pref)
}

/// Eq.-(1) form: products of two operator harmonics acting on 1/R,
/// reduced termwise through the addition theorem.
pub fn eval_form1(g: &BipolarGeometry, t: Truncation) -> Result<f64> {
    check_separation(g)?;
    let l_max = t.l_max;
    let yb = harmonic_table(l_max, g.b)?;
    let ya = harmonic_table(l_max, g.a)?;
    let yr = harmonic_table(2 * l_max, g.separation)?;
    let gaunts = GauntTable::new(l_max);
    let rn = g.separation.norm();
    let bn = g.b.norm();
    let an = g.a.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..=l_max {
        if bn == 0.0 && l > 0 {
            break;
        }
        for lp in 0..=l_max {
            if an == 0.0 && lp > 0 {
                break;
            }
            let sign = if lp % 2 == 0 { 1.0 } else { -1.0 };
            let pref = sign * (4.0 * PI) * (4.0 * PI) * bn.powi(l as i32) * an.powi(lp as i32)
                / (double_factorial(2 * l as i64 + 1)? * double_factorial(2 * lp as i64 + 1)?);
            let big = l + lp;
            let irr_scale = double_factorial(2 * big as i64 - 1)? / rn.powi(big as i32 + 1);
            for m in -(l as i32)..=l as i32 {
                for mp in -(lp as i32)..=lp as i32 {
                    let term = yb.get(l, m).conj()
                        * ya.get(lp, mp).conj()
                        * (gaunts.get(l, m, lp, mp) * irr_scale)
                        * yr.get(big, m + mp);
                    sum += term * pref;
                }
            }
        }
    }
    Ok(sum.re)
}

/// Eq.-(2) form: Gaunt-coupled single irregular harmonic of order l + l'.
pub fn eval_form2(g: &BipolarGeometry, t: Truncation) -> Result<f64> {
    check_separation(g)?;
    let l_max = t.l_max;
    let yb = harmonic_table(l_max, g.b)?;
    let ya = harmonic_table(l_max, g.a)?;
    let yr = harmonic_table(2 * l_max, g.separation)?;
    let gaunts = GauntTable::new(l_max);
    let rn = g.separation.norm();
    let bn = g.b.norm();
    let an = g.a.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..=l_max {
        if bn == 0.0 && l > 0 {
            break;
        }
        for lp in 0..=l_max {
            if an == 0.0 && lp > 0 {
                break;
            }
            // (-1)^l prefactor with Y_{l+l'}(∇) = (-1)^{l+l'} Y_{l+l'}(-∇)
            let big = l + lp;
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let parity = if big % 2 == 0 { 1.0 } else { -1.0 };
            let pref =
                sign * parity * (4.0 * PI) * (4.0 * PI) * bn.powi(l as i32) * an.powi(lp as i32)
                    / (double_factorial(2 * l as i64 + 1)? * double_factorial(2 * lp as i64 + 1)?);
            let irr_scale = double_factorial(2 * big as i64 - 1)? / rn.powi(big as i32 + 1);
            for m in -(l as i32)..=l as i32 {
                for mp in -(lp as i32)..=lp as i32 {
                    let term = yb.get(l, m).conj()
                        * ya.get(lp, mp).conj()
                        * (gaunts.get(l, m, lp, mp) * irr_scale)
                        * yr.get(big, m + mp);
                    sum += term * pref;
                }
            }
        }
    }
    Ok(sum.re)
}

/// Multiplicities of each exponent triple obtained by enumerating all
/// 3^l raw Cartesian index tuples (i₁, ..., i_l).
fn enumerate_tuple_counts(l: u32) -> Vec<((u32, u32, u32), f64)> {
    let mut counts = std::collections::BTreeMap::new();
    let total = 3usize.pow(l);
    for mut code in 0..total {
        let mut p = [0u32; 3];
        for _ in 0..l {
            p[code % 3] += 1;
            code /= 3;
        }
        *counts.entry((p[0], p[1], p[2])).or_insert(0.0) += 1.0;
    }
    counts.into_iter().collect()
}

fn cartesian_form_sum(
    g: &BipolarGeometry,
    t: Truncation,
    weights: impl Fn(u32, u32, (u32, u32, u32), (u32, u32, u32), f64, f64) -> f64,
) -> Result<f64> {
    check_separation(g)?;
    let l_max = t.l_max;
    let derivs = InverseRadialDerivs::new(2 * l_max);
    let bn = g.b.norm();
    let an = g.a.norm();
    let mut sum = 0.0;
    for l in 0..=l_max {
        if bn == 0.0 && l > 0 {
            break;
        }
        let b_triples = enumerate_tuple_counts(l);
        for lp in 0..=l_max {
            if an == 0.0 && lp > 0 {
                break;
            }
            let a_triples = enumerate_tuple_counts(lp);
            let sign = if lp % 2 == 0 { 1.0 } else { -1.0 };
            let pref = sign * ((2 * l + 1) * (2 * lp + 1)) as f64
                / (double_factorial(2 * l as i64 + 1)? * double_factorial(2 * lp as i64 + 1)?);
            let mut contraction = 0.0;
            for &(p, cp) in &b_triples {
                // b^{2l+1} ∂^p(1/b) is the plain numerator polynomial P_p(b)
                let db = derivs.numerator(p, g.b);
                if db == 0.0 {
                    continue;
                }
                for &(q, cq) in &a_triples {
                    let da = derivs.numerator(q, g.a);
                    if da == 0.0 {
                        continue;
                    }
                    let dr = derivs.eval((p.0 + q.0, p.1 + q.1, p.2 + q.2), g.separation);
                    contraction += weights(l, lp, p, q, cp, cq) * db * da * dr;
                }
            }
            sum += pref * contraction;
        }
    }
    Ok(sum)
}

/// Eq.-(3) form: full Cartesian contraction over the raw index tuples
/// i₁..i_l, j₁..j_{l'} (multiplicities obtained by enumeration).
pub fn eval_form3(g: &BipolarGeometry, t: Truncation) -> Result<f64> {
    cartesian_form_sum(g, t, |l, lp, _p, _q, cp, cq| {
        cp * cq / (factorial(l) * factorial(lp))
    })
}

/// Eq.-(4) form: compressed exponent triples with multinomial weights.
pub fn eval_form4(g: &BipolarGeometry, t: Truncation) -> Result<f64> {
    cartesian_form_sum(g, t, |_l, _lp, p, q, _cp, _cq| {
        1.0 / (factorial(p.0)
            * factorial(p.1)
            * factorial(p.2)
            * factorial(q.0)
            * factorial(q.1)
            * factorial(q.2))
    })
}

/// ∂_x^{p_x} ∂_y^{p_y} ∂_z^{p_z} (1/r) away from the origin, by the
/// exact integer-coefficient recursion (no finite differencing).
pub fn cartesian_deriv_inverse_r(p: (u32, u32, u32), r: Vec3) -> Result<f64> {
    if r.is_zero() {
        return Err(Error::Singularity(
            "derivatives of 1/r at the origin".into(),
        ));
    }
    let table = InverseRadialDerivs::new(p.0 + p.1 + p.2);
    Ok(table.eval(p, r))
}

/// Residual of the addition theorem
/// |Y_lm(-∇)Y_{l'm'}(-∇)(1/R) - <l+l',m+m'|lm|l'm'> Y_{l+l',m+m'}(-∇)(1/R)|.
///
/// The left side composes the two differential operators literally
/// (solid-harmonic polynomials in ∂ applied through the exact derivative
/// table); the right side is the Gaunt-coupled irregular harmonic.
pub fn addition_theorem_residual(l: u32, m: i32, lp: u32, mp: i32, r: Vec3) -> Result<f64> {
    if r.is_zero() {
        return Err(Error::Singularity("addition theorem at R = 0".into()));
    }
    let pa = solid_harmonic_poly(AngularIndex::new(l, m)?)?;
    let pb = solid_harmonic_poly(AngularIndex::new(lp, mp)?)?;
    let product = pa.mul(&pb);
    let derivs = InverseRadialDerivs::new(l + lp);
    let parity = if (l + lp).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut lhs = Complex64::new(0.0, 0.0);
    for (&key, &c) in product.terms() {
        lhs += c * (parity * derivs.eval(key, r));
    }
    let rhs =
        gaunt(l, m, lp, mp)? * irregular_solid_harmonic(AngularIndex::new(l + lp, m + mp)?, r)?;
    Ok((lhs - rhs).norm())
}

/// Partial Rayleigh sum
/// Σ_{l,l' <= l_max} j_l(kb) j*_{l'}(ka) Y*_lm(b̂) Y*_{l'm'}(â) Y_lm(k̂) Y_{l'm'}(k̂)
/// in the 4π i^l Bessel convention; converges to exp(i k·(b - a)).
pub fn rayleigh_partial_sum(k: Vec3, b: Vec3, a: Vec3, l_max: u32) -> Result<Complex64> {
    let kn = k.norm();
    let kdir = if kn == 0.0 {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        k
    };
    let yk = SphericalHarmonicTable::new(l_max, kdir)?;
    let yb = harmonic_table(l_max, b)?;
    let ya = harmonic_table(l_max, a)?;
    let bn = b.norm();
    let an = a.norm();
    let mut sum_b = Complex64::new(0.0, 0.0);
    let mut sum_a = Complex64::new(0.0, 0.0);
    for l in 0..=l_max {
        let jb = spherical_bessel_rayleigh(l, kn * bn);
        let ja = spherical_bessel_rayleigh(l, kn * an).conj();
        for m in -(l as i32)..=l as i32 {
            sum_b += jb * yb.get(l, m).conj() * yk.get(l, m);
            sum_a += ja * ya.get(l, m).conj() * yk.get(l, m);
        }
    }
    Ok(sum_b * sum_a)
}
