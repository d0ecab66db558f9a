//! Complex orthonormal spherical harmonics (Condon–Shortley phase) and
//! the regular / irregular solid harmonics built on them.

use super::{double_factorial, AngularIndex};
use crate::error::{Error, Result};
use crate::vec3::Vec3;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Normalized associated Legendre values Q_l^m(θ) for one fixed m >= 0 and
/// all l in [m, l_max], such that Y_lm = Q_l^m e^{imφ}. The sectoral seed
/// carries the Condon–Shortley phase.
fn legendre_column(l_max: u32, m: u32, cos_t: f64, sin_t: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), (l_max - m + 1) as usize);
    // Q_mm = (-1)^m sqrt((2m+1)!! / (4π (2m)!!)) sin^m θ
    let mut q = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        q *= -((2.0 * k as f64 + 1.0) / (2.0 * k as f64)).sqrt() * sin_t;
    }
    out[0] = q;
    if l_max == m {
        return;
    }
    out[1] = ((2 * m + 3) as f64).sqrt() * cos_t * q;
    for l in (m + 2)..=l_max {
        let lf = l as f64;
        let mf = m as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b =
            (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let i = (l - m) as usize;
        out[i] = a * (cos_t * out[i - 1] - b * out[i - 2]);
    }
}

fn polar_angles(direction: Vec3) -> Result<(f64, f64, f64)> {
    let r = direction.norm();
    if r == 0.0 {
        return Err(Error::Domain(
            "spherical harmonic of the zero vector".into(),
        ));
    }
    let cos_t = (direction.z / r).clamp(-1.0, 1.0);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let phi = direction.y.atan2(direction.x);
    Ok((cos_t, sin_t, phi))
}

/// Y_lm(r̂): complex orthonormal spherical harmonic with the
/// Condon–Shortley phase; Y_{l,-m} = (-1)^m conj(Y_{l,m}).
pub fn sph_harm(idx: AngularIndex, direction: Vec3) -> Result<Complex64> {
    let (cos_t, sin_t, phi) = polar_angles(direction)?;
    let m_abs = idx.m.unsigned_abs();
    let mut col = vec![0.0; (idx.l - m_abs + 1) as usize];
    legendre_column(idx.l, m_abs, cos_t, sin_t, &mut col);
    let q = col[(idx.l - m_abs) as usize];
    let phase = Complex64::from_polar(1.0, m_abs as f64 * phi);
    let y = q * phase;
    if idx.m >= 0 {
        Ok(y)
    } else {
        Ok(if m_abs.is_multiple_of(2) {
            y.conj()
        } else {
            -y.conj()
        })
    }
}

/// All Y_lm(r̂) for l <= l_max, evaluated once per direction.
pub struct SphericalHarmonicTable {
    l_max: u32,
    values: Vec<Complex64>,
}

impl SphericalHarmonicTable {
    pub fn new(l_max: u32, direction: Vec3) -> Result<Self> {
        let (cos_t, sin_t, phi) = polar_angles(direction)?;
        let mut values = vec![Complex64::new(0.0, 0.0); ((l_max + 1) * (l_max + 1)) as usize];
        let mut col = vec![0.0; (l_max + 1) as usize];
        for m in 0..=l_max {
            legendre_column(l_max, m, cos_t, sin_t, &mut col[..(l_max - m + 1) as usize]);
            let phase = Complex64::from_polar(1.0, m as f64 * phi);
            for l in m..=l_max {
                let y = col[(l - m) as usize] * phase;
                values[Self::index(l, m as i32)] = y;
                if m > 0 {
                    let ym = if m % 2 == 0 { y.conj() } else { -y.conj() };
                    values[Self::index(l, -(m as i32))] = ym;
                }
            }
        }
        Ok(SphericalHarmonicTable { l_max, values })
    }

    fn index(l: u32, m: i32) -> usize {
        (l * l) as usize + (l as i32 + m) as usize
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn get(&self, l: u32, m: i32) -> Complex64 {
        debug_assert!(l <= self.l_max && m.unsigned_abs() <= l);
        self.values[Self::index(l, m)]
    }
}

/// Regular solid harmonic r^l Y_lm(r̂); at r = 0 this is 1/sqrt(4π) for
/// l = 0 and 0 for l >= 1.
pub fn regular_solid_harmonic(idx: AngularIndex, r: Vec3) -> Result<Complex64> {
    let n = r.norm();
    if n == 0.0 {
        return if idx.l == 0 {
            Ok(Complex64::new(1.0 / (4.0 * PI).sqrt(), 0.0))
        } else {
            Ok(Complex64::new(0.0, 0.0))
        };
    }
    Ok(sph_harm(idx, r)? * n.powi(idx.l as i32))
}

/// Value of Y_lm(-∇) applied to 1/R away from the origin:
/// (2l-1)!! Y_lm(R̂) / R^{l+1}.
pub fn irregular_solid_harmonic(idx: AngularIndex, r: Vec3) -> Result<Complex64> {
    let n = r.norm();
    if n == 0.0 {
        return Err(Error::Singularity(
            "irregular solid harmonic is undefined at the origin".into(),
        ));
    }
    let df = double_factorial(2 * idx.l as i64 - 1)?;
    Ok(sph_harm(idx, r)? * (df / n.powi(idx.l as i32 + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn idx(l: u32, m: i32) -> AngularIndex {
        AngularIndex::new(l, m).unwrap()
    }

    #[test]
    fn low_order_closed_forms() {
        let d = Vec3::new(0.3, -0.2, 0.9);
        let y00 = sph_harm(idx(0, 0), d).unwrap();
        assert_relative_eq!(y00.re, 0.28209479177387814, epsilon = 1e-15);
        assert_eq!(y00.im, 0.0);

        let y10 = sph_harm(idx(1, 0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(y10.re, 0.4886025119029199, epsilon = 1e-15);
    }

    #[test]
    fn y21_against_closed_form_oracle() {
        // Y_21 = -sqrt(15/8π) sinθ cosθ e^{iφ} at θ=π/4, φ=π/3
        let (theta, phi) = (PI / 4.0, PI / 3.0);
        let d = Vec3::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        );
        let y = sph_harm(idx(2, 1), d).unwrap();
        let amp = -(15.0 / (8.0 * PI)).sqrt() * theta.sin() * theta.cos();
        let oracle = Complex64::from_polar(1.0, phi) * amp;
        assert!((y - oracle).norm() < 1e-13, "{y} vs {oracle}");
    }

    #[test]
    fn negative_m_symmetry() {
        let d = Vec3::new(0.5, 0.7, -0.3);
        for l in 0..=8u32 {
            for m in 0..=l as i32 {
                let yp = sph_harm(idx(l, m), d).unwrap();
                let ym = sph_harm(idx(l, -m), d).unwrap();
                let expect = yp.conj() * if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((ym - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn unsold_sum_rule() {
        let d = Vec3::new(-0.4, 1.3, 0.8);
        for l in 0..=10u32 {
            let s: f64 = (-(l as i32)..=l as i32)
                .map(|m| sph_harm(idx(l, m), d).unwrap().norm_sqr())
                .sum();
            assert_relative_eq!(s, (2 * l + 1) as f64 / (4.0 * PI), epsilon = 1e-12);
        }
    }

    #[test]
    fn table_matches_single_evaluations() {
        let d = Vec3::new(0.2, -0.9, 0.5);
        let table = SphericalHarmonicTable::new(12, d).unwrap();
        for l in 0..=12u32 {
            for m in -(l as i32)..=l as i32 {
                let single = sph_harm(idx(l, m), d).unwrap();
                assert!((table.get(l, m) - single).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn solid_harmonics() {
        // r^l scaling of Y_10
        let v = regular_solid_harmonic(idx(1, 0), Vec3::new(0.0, 0.0, 2.0)).unwrap();
        assert_relative_eq!(v.re, 2.0 * 0.4886025119029199, epsilon = 1e-14);
        // l = 0 is independent of r
        let v = regular_solid_harmonic(idx(0, 0), Vec3::new(5.0, 5.0, 5.0)).unwrap();
        assert_relative_eq!(v.re, 0.28209479177387814, epsilon = 1e-15);
        // polynomial oracle: Y_22 r^2 = (1/4)sqrt(15/2π)(x+iy)^2 at (1,1,0) -> (1/4)sqrt(15/2π)·2i
        let v = regular_solid_harmonic(idx(2, 2), Vec3::new(1.0, 1.0, 0.0)).unwrap();
        assert!(v.re.abs() < 1e-15);
        assert_relative_eq!(v.im, 0.7725484040463791, epsilon = 1e-14);
        // value at the origin
        let v = regular_solid_harmonic(idx(3, 1), Vec3::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn irregular_solid_low_orders() {
        // l=0: 1/R times Y_00
        let v = irregular_solid_harmonic(idx(0, 0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(v.re, 0.28209479177387814, epsilon = 1e-15);
        // l=1 on the z axis at R=2: 1!! Y_10 / 4
        let v = irregular_solid_harmonic(idx(1, 0), Vec3::new(0.0, 0.0, 2.0)).unwrap();
        assert_relative_eq!(v.re, 0.4886025119029199 / 4.0, epsilon = 1e-14);
        // l=2 at R=ẑ: 3 Y_20(ẑ) = 3 sqrt(5/4π)
        let v = irregular_solid_harmonic(idx(2, 0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(v.re, 3.0 * (5.0 / (4.0 * PI)).sqrt(), epsilon = 1e-13);
        assert!(irregular_solid_harmonic(idx(1, 0), Vec3::new(0.0, 0.0, 0.0)).is_err());
    }

    /// Central finite differences of 1/R composed per Y_lm(-∇), for l <= 2.
    #[test]
    fn irregular_solid_finite_difference_oracle() {
        let r = Vec3::new(0.3, -0.7, 1.1);
        let h = 1e-3;
        let inv = |v: Vec3| 1.0 / v.norm();
        // Y_10(-∇) = -sqrt(3/4π) ∂_z
        let dz = (inv(r + Vec3::new(0.0, 0.0, h)) - inv(r - Vec3::new(0.0, 0.0, h))) / (2.0 * h);
        let fd = -(3.0 / (4.0 * PI)).sqrt() * dz;
        let v = irregular_solid_harmonic(idx(1, 0), r).unwrap();
        assert!((v.re - fd).abs() < 1e-6);
        // Y_20(-∇) = sqrt(5/16π)(2∂_z² - ∂_x² - ∂_y²)
        let second = |axis: usize| {
            let mut e = Vec3::new(0.0, 0.0, 0.0);
            match axis {
                0 => e.x = h,
                1 => e.y = h,
                _ => e.z = h,
            }
            (inv(r + e) - 2.0 * inv(r) + inv(r - e)) / (h * h)
        };
        let fd = (5.0 / (16.0 * PI)).sqrt() * (2.0 * second(2) - second(0) - second(1));
        let v = irregular_solid_harmonic(idx(2, 0), r).unwrap();
        assert!((v.re - fd).abs() < 1e-6, "{} vs {}", v.re, fd);
    }
}
