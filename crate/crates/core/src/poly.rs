//! Trivariate complex polynomials and the solid harmonics expressed in
//! the Cartesian monomial basis. Used to apply Y_lm(-∇) as a genuine
//! differential operator and to take analytic moments of shifted densities.

use crate::error::{Error, Result};
use crate::specfun::{binomial, factorial, AngularIndex};
use crate::vec3::Vec3;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Polynomial in (x, y, z) with complex coefficients, keyed by the
/// exponent triple.
#[derive(Clone, Debug, Default)]
pub struct Poly3 {
    terms: BTreeMap<(u32, u32, u32), Complex64>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Poly3::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Poly3::zero();
        p.add_term((0, 0, 0), c);
        p
    }

    pub fn add_term(&mut self, key: (u32, u32, u32), c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm_sqr() == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: (u32, u32, u32)) -> Complex64 {
        self.terms
            .get(&key)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn add_in_place(&mut self, other: &Poly3) {
        for (&k, &c) in &other.terms {
            self.add_term(k, c);
        }
    }

    pub fn scaled(&self, s: Complex64) -> Poly3 {
        let mut out = Poly3::zero();
        for (&k, &c) in &self.terms {
            out.add_term(k, c * s);
        }
        out
    }

    pub fn conjugated(&self) -> Poly3 {
        let mut out = Poly3::zero();
        for (&k, &c) in &self.terms {
            out.add_term(k, c.conj());
        }
        out
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(a, b, c), &u) in &self.terms {
            for (&(d, e, f), &v) in &other.terms {
                out.add_term((a + d, b + e, c + f), u * v);
            }
        }
        out
    }

    pub fn eval(&self, r: Vec3) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j, k), &c) in &self.terms {
            acc += c * (r.x.powi(i as i32) * r.y.powi(j as i32) * r.z.powi(k as i32));
        }
        acc
    }

    /// Substitute x -> x + d.x, y -> y + d.y, z -> z + d.z.
    pub fn translated(&self, d: Vec3) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(i, j, k), &c) in &self.terms {
            for a in 0..=i {
                let ca = binomial(i, a) * d.x.powi((i - a) as i32);
                for b in 0..=j {
                    let cb = binomial(j, b) * d.y.powi((j - b) as i32);
                    for g in 0..=k {
                        let cg = binomial(k, g) * d.z.powi((k - g) as i32);
                        out.add_term((a, b, g), c * (ca * cb * cg));
                    }
                }
            }
        }
        out
    }

    /// (x² + y² + z²)^n
    pub fn radius_squared_power(n: u32) -> Poly3 {
        let mut r2 = Poly3::zero();
        r2.add_term((2, 0, 0), Complex64::new(1.0, 0.0));
        r2.add_term((0, 2, 0), Complex64::new(1.0, 0.0));
        r2.add_term((0, 0, 2), Complex64::new(1.0, 0.0));
        let mut out = Poly3::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(&r2);
        }
        out
    }
}

/// Lowering operator L_- = -i y ∂_z + i z ∂_y - z ∂_x + x ∂_z on a
/// polynomial (ℏ = 1).
fn apply_lowering(p: &Poly3) -> Poly3 {
    let i = Complex64::new(0.0, 1.0);
    let mut out = Poly3::zero();
    for (&(a, b, c), &u) in p.terms() {
        if c > 0 {
            // -i y ∂_z
            out.add_term((a, b + 1, c - 1), -i * (c as f64) * u);
            // +x ∂_z
            out.add_term((a + 1, b, c - 1), (c as f64) * u);
        }
        if b > 0 {
            // +i z ∂_y
            out.add_term((a, b - 1, c + 1), i * (b as f64) * u);
        }
        if a > 0 {
            // -z ∂_x
            out.add_term((a - 1, b, c + 1), -Complex64::new(a as f64, 0.0) * u);
        }
    }
    out
}

/// The regular solid harmonic r^l Y_lm(r̂) as an explicit polynomial,
/// built from the sectoral (x+iy)^l seed by repeated lowering.
pub fn solid_harmonic_poly(idx: AngularIndex) -> Result<Poly3> {
    let l = idx.l;
    if idx.m.unsigned_abs() > l {
        return Err(Error::Domain(format!(
            "|m| = {} exceeds l = {l}",
            idx.m.abs()
        )));
    }
    // Y_ll = (-1)^l / (2^l l!) sqrt((2l+1)!/(4π)) (x + iy)^l
    let norm = {
        let mut f = 1.0;
        for k in 2..=(2 * l) as u64 {
            f *= k as f64;
        }
        (f * (2 * l + 1) as f64 / (4.0 * PI)).sqrt() / (2f64.powi(l as i32) * factorial(l))
    };
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut xy = Poly3::constant(Complex64::new(sign * norm, 0.0));
    let mut step = Poly3::zero();
    step.add_term((1, 0, 0), Complex64::new(1.0, 0.0));
    step.add_term((0, 1, 0), Complex64::new(0.0, 1.0));
    for _ in 0..l {
        xy = xy.mul(&step);
    }
    // lower from m = l down to |m|
    let m_abs = idx.m.unsigned_abs();
    let mut poly = xy;
    let mut m = l as i32;
    while m > m_abs as i32 {
        let fac = ((l as f64 + m as f64) * (l as f64 - m as f64 + 1.0)).sqrt();
        poly = apply_lowering(&poly).scaled(Complex64::new(1.0 / fac, 0.0));
        m -= 1;
    }
    if idx.m >= 0 {
        Ok(poly)
    } else {
        let s = if m_abs.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(poly.conjugated().scaled(Complex64::new(s, 0.0)))
    }
}
