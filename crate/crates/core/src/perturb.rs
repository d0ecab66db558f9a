//! First-order perturbation corrections for two ground-state hydrogen
//! atoms and for a hydrogen atom plus a proton, exchange neglected.
//!
//! Everything works through the momentum-space operator: the hydrogen
//! charge density e δ(r) - e δ(r - a) turns the two-body interaction
//! into (4πe²/k²)(e^{ik·a} - 1)(e^{-ik·b} - 1); averaging over the
//! spherical 1s states keeps only the monopole, giving the 1s form
//! factor F(k) = 16/(4 + k²a₀²)².

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::spherical_bessel_std;
use crate::vec3::Vec3;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbKind {
    HydrogenHydrogen,
    HydrogenProton,
}

/// Unperturbed system: ground-state hydrogen against a second hydrogen
/// or a bare proton. `e` is the proton charge, `a0` the Bohr radius.
#[derive(Clone, Copy, Debug)]
pub struct PerturbSystem {
    pub kind: PerturbKind,
    pub a0: f64,
    pub e: f64,
}

impl PerturbSystem {
    pub fn new(kind: PerturbKind, a0: f64, e: f64) -> Result<Self> {
        if a0 <= 0.0 {
            return Err(Error::Domain(format!(
                "Bohr radius must be positive, got {a0}"
            )));
        }
        Ok(PerturbSystem { kind, a0, e })
    }

    pub fn hydrogen_hydrogen() -> Self {
        PerturbSystem {
            kind: PerturbKind::HydrogenHydrogen,
            a0: 1.0,
            e: 1.0,
        }
    }

    pub fn hydrogen_proton() -> Self {
        PerturbSystem {
            kind: PerturbKind::HydrogenProton,
            a0: 1.0,
            e: 1.0,
        }
    }

    /// Ground-state energy E₀ = -e²/(2a₀).
    pub fn ground_state_energy(&self) -> f64 {
        -self.e * self.e / (2.0 * self.a0)
    }

    /// |Ψ⁽⁰⁾(r)|² of the 1s state.
    pub fn density_1s(&self, r: f64) -> f64 {
        (-2.0 * r / self.a0).exp() / (PI * self.a0.powi(3))
    }

    /// 1s charge form factor F(k) = 16/(4 + k²a₀²)².
    pub fn form_factor_1s(&self, k: f64) -> f64 {
        let x = k * self.a0;
        16.0 / (4.0 + x * x).powi(2)
    }

    /// Momentum-space two-atom operator
    /// W̃(a, b; k) = (4πe²/k²)(e^{ik·a} - 1)(e^{-ik·b} - 1):
    /// the four Bessel sums of the multipole form, closed by the
    /// Rayleigh identity. Complex for generic directions; the
    /// expectation over spherical states keeps only its monopole.
    pub fn w_fourier_hh(&self, a: Vec3, b: Vec3, k: Vec3) -> Result<Complex64> {
        let k2 = k.norm_squared();
        if k2 == 0.0 {
            return Err(Error::Singularity("momentum-space kernel at k = 0".into()));
        }
        let e2 = self.e * self.e;
        let fa = Complex64::from_polar(1.0, k.dot(a)) - 1.0;
        let fb = Complex64::from_polar(1.0, -k.dot(b)) - 1.0;
        Ok(fa * fb * (4.0 * PI * e2 / k2))
    }

    /// Monopole (l = l' = 0) sector of [`Self::w_fourier_hh`]:
    /// (4πe²/k²)(j₀(ka) - 1)(j₀(kb) - 1).
    pub fn w_fourier_hh_monopole(&self, a: f64, b: f64, k: f64) -> Result<f64> {
        if k == 0.0 {
            return Err(Error::Singularity("momentum-space kernel at k = 0".into()));
        }
        let e2 = self.e * self.e;
        Ok(4.0 * PI * e2 / (k * k)
            * (spherical_bessel_std(0, k * a) - 1.0)
            * (spherical_bessel_std(0, k * b) - 1.0))
    }

    /// Ẽ⁽¹⁾(k): the momentum-space first-order correction. Valid for
    /// k >= 0; the removable k = 0 limit (2πe²a₀² for the proton case,
    /// 0 for two atoms) is evaluated through the bracket series.
    pub fn first_order_fourier(&self, k: f64) -> f64 {
        let x = (k * self.a0) * (k * self.a0);
        let e2 = self.e * self.e;
        match self.kind {
            PerturbKind::HydrogenProton => {
                // (4πe²/k²)(1 - F) = 4πe² a₀² B(x)/x
                4.0 * PI * e2 * self.a0 * self.a0 * bracket_over_x(Complex64::new(x, 0.0)).re
            }
            PerturbKind::HydrogenHydrogen => {
                // (4πe²/k²)(1 - F)² = 4πe² a₀² x (B(x)/x)²
                let b = bracket_over_x(Complex64::new(x, 0.0)).re;
                4.0 * PI * e2 * self.a0 * self.a0 * x * b * b
            }
        }
    }

    /// Closed-form E⁽¹⁾(R).
    pub fn first_order_closed(&self, r: f64) -> Result<f64> {
        match self.kind {
            PerturbKind::HydrogenProton => e1_hp_closed(r, self.a0, self.e),
            PerturbKind::HydrogenHydrogen => e1_hh_closed(r, self.a0, self.e),
        }
    }

    /// E⁽¹⁾(R) by numerical inversion of Ẽ⁽¹⁾:
    /// (1/2π²) ∫₀^∞ k² Ẽ⁽¹⁾(k) j₀(kR) dk.
    ///
    /// The radial integral is evaluated on the rotated ray k = t e^{iπ/4}
    /// (no poles in that sector; the integrand decays like e^{-tR/√2}).
    /// On the real axis the result is exponentially smaller than the
    /// integrand scale, and no f64 panel summation reaches 1e-8 of it at
    /// R = 10a₀; the rotation removes that cancellation.
    pub fn first_order_numeric(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Err(Error::Domain(format!(
                "separation must be positive, got {r}"
            )));
        }
        let a0 = self.a0;
        let e2 = self.e * self.e;
        let power = match self.kind {
            PerturbKind::HydrogenProton => 1,
            PerturbKind::HydrogenHydrogen => 2,
        };
        // k² Ẽ(k) = 4πe² (1 - F(k))^power; with j₀(kR) = Im e^{ikR}/(kR):
        // E(R) = (2e²/(πR)) Im ∫₀^∞ (1 - F)^power e^{ikR} / k dk
        let phase = Complex64::from_polar(1.0, FRAC_PI_4);
        let integrand = |t: f64| -> Complex64 {
            if t == 0.0 {
                // (1 - F)^power / k vanishes at k = 0 for both systems
                return Complex64::new(0.0, 0.0);
            }
            let k = phase * t;
            let x = (k * a0) * (k * a0);
            let b_over_x = bracket_over_x(x);
            // (1 - F)/k = k a₀² B(x)/x; squared and divided by one more k
            // for the two-atom case: k³ a₀⁴ (B/x)²
            let frac = match power {
                1 => k * (a0 * a0) * b_over_x,
                _ => k * k * k * (a0 * a0 * a0 * a0) * b_over_x * b_over_x,
            };
            frac * (Complex64::new(0.0, 1.0) * k * r).exp()
        };
        // e^{-t R sin(π/4)} is dead beyond ~68/R; the 8/a₀ margin keeps
        // the bracket's k ~ 2/a₀ structure covered at large R
        let t_max = 48.0 * std::f64::consts::SQRT_2 / r + 8.0 / a0;
        let (g, _) = quad::adaptive(integrand, 0.0, t_max, 1e-16, 1e-14)?;
        Ok(2.0 * e2 / (PI * r) * (g * phase).im)
    }
}

/// B(x)/x where B(x) = 1 - 16/(4 + x)² and x = (k a₀)²; the series
/// branch removes the small-x cancellation (switch at |x| < 1e-6,
/// i.e. k a₀ < 1e-3).
fn bracket_over_x(x: Complex64) -> Complex64 {
    if x.norm() < 1e-6 {
        // B(x)/x = Σ_{j≥1} (-1)^{j+1} (j+1) x^{j-1} / 4^j
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for j in 1..10 {
            let c = (j + 1) as f64 / 4f64.powi(j) * if j % 2 == 1 { 1.0 } else { -1.0 };
            sum += pow * c;
            pow *= x;
        }
        sum
    } else {
        let d = x + 4.0;
        (1.0 - 16.0 / (d * d)) / x
    }
}

/// E⁽¹⁾(R) = (e²/R) e^{-2R/a₀} (R/a₀ + 1) for hydrogen + proton.
pub fn e1_hp_closed(r: f64, a0: f64, e: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!(
            "separation must be positive, got {r}"
        )));
    }
    Ok(e * e / r * (-2.0 * r / a0).exp() * (r / a0 + 1.0))
}

/// E⁽¹⁾(R) = (E₀a₀/12R) e^{-2R/a₀} (4R³/a₀³ + 18R²/a₀² - 15R/a₀ - 24)
/// for two hydrogen atoms, E₀ = -e²/(2a₀).
pub fn e1_hh_closed(r: f64, a0: f64, e: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!(
            "separation must be positive, got {r}"
        )));
    }
    let e0 = -e * e / (2.0 * a0);
    let rho = r / a0;
    Ok(e0 * a0 / (12.0 * r)
        * (-2.0 * rho).exp()
        * (4.0 * rho.powi(3) + 18.0 * rho * rho - 15.0 * rho - 24.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wavefunction_normalization() {
        let sys = PerturbSystem::new(PerturbKind::HydrogenHydrogen, 0.7, 1.0).unwrap();
        let (norm, _) = quad::adaptive(
            |r: f64| 4.0 * PI * r * r * sys.density_1s(r),
            0.0,
            40.0 * 0.7,
            1e-14,
            1e-13,
        )
        .unwrap();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn operator_at_coincident_electrons() {
        // a = b = 0: two bare protons minus themselves, exactly zero
        let sys = PerturbSystem::hydrogen_hydrogen();
        let w = sys
            .w_fourier_hh(Vec3::default(), Vec3::default(), Vec3::new(0.0, 0.3, 1.0))
            .unwrap();
        assert!(w.norm() < 1e-15);
        assert!(sys
            .w_fourier_hh(Vec3::default(), Vec3::default(), Vec3::default())
            .is_err());
    }

    #[test]
    fn operator_large_k_limit() {
        // Bessel decay leaves the bare proton-proton term 4πe²/k²
        let sys = PerturbSystem::hydrogen_hydrogen();
        let a: f64 = 1.3;
        let b = 0.7;
        let mut avg = 0.0;
        let k = 2000.0;
        let n = 64;
        for i in 0..n {
            // average the monopole kernel over a k-window to damp the oscillation
            let kk = k + i as f64 / n as f64 * PI / a.max(b);
            avg += sys.w_fourier_hh_monopole(a, b, kk).unwrap() * (kk * kk);
        }
        avg /= n as f64;
        assert_relative_eq!(avg, 4.0 * PI, max_relative = 2e-3);
    }

    #[test]
    fn monopole_is_the_spherical_average() {
        // averaging e^{±ik·a} over â gives j₀(ka)
        let sys = PerturbSystem::hydrogen_hydrogen();
        let (a, b, k) = (0.9, 0.6, 1.7);
        let kvec = Vec3::new(0.0, 0.0, k);
        let n = 400;
        let mut avg = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let ca = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
                let cb = -1.0 + 2.0 * (j as f64 + 0.5) / n as f64;
                let av = Vec3::new((1.0 - ca * ca).sqrt(), 0.0, ca) * a;
                let bv = Vec3::new(0.0, (1.0 - cb * cb).sqrt(), cb) * b;
                avg += sys.w_fourier_hh(av, bv, kvec).unwrap();
            }
        }
        avg *= Complex64::new(1.0 / (n * n) as f64, 0.0);
        let mono = sys.w_fourier_hh_monopole(a, b, k).unwrap();
        assert_relative_eq!(avg.re, mono, max_relative = 1e-4);
        assert!(avg.im.abs() < 1e-4 * mono.abs());
    }

    #[test]
    fn fourier_correction_spot_values() {
        let sys = PerturbSystem::hydrogen_proton();
        // k = 2/a₀: (πe²a₀²)(1 - 16/64) = (3/4)πe²a₀²
        assert_relative_eq!(
            sys.first_order_fourier(2.0),
            0.75 * PI,
            max_relative = 1e-13
        );
        // k → 0: removable limit 2πe²a₀²
        assert_relative_eq!(sys.first_order_fourier(0.0), 2.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(
            sys.first_order_fourier(1e-9),
            2.0 * PI,
            max_relative = 1e-12
        );
        // k → ∞: 4πe²/k²
        let k = 500.0;
        assert_relative_eq!(
            sys.first_order_fourier(k),
            4.0 * PI / (k * k),
            max_relative = 1e-6
        );
        // H-H integrand is the square of the H-p bracket times the kernel
        let hh = PerturbSystem::hydrogen_hydrogen();
        for &k in &[0.3, 1.0, 2.0, 7.0] {
            let kernel = 4.0 * PI / (k * k);
            let hp_bracket = sys.first_order_fourier(k) / kernel;
            assert_relative_eq!(
                hh.first_order_fourier(k),
                kernel * hp_bracket * hp_bracket,
                max_relative = 1e-12
            );
        }
        // H-H vanishes at k → 0 (double zero of the squared bracket)
        assert!(hh.first_order_fourier(1e-9).abs() < 1e-15);
    }

    /// Expectation-value quadrature ⟨W̃⟩ over |Ψ⁽⁰⁾|² as the oracle for
    /// the momentum-space corrections.
    #[test]
    fn fourier_correction_vs_expectation_quadrature() {
        let hp = PerturbSystem::hydrogen_proton();
        let hh = PerturbSystem::hydrogen_hydrogen();
        for &k in &[0.4, 1.0, 2.0, 5.0] {
            // ⟨j₀(ka) - 1⟩ over the 1s density
            let (avg, _) = quad::adaptive(
                |a: f64| {
                    (spherical_bessel_std(0, k * a) - 1.0) * 4.0 * PI * a * a * hp.density_1s(a)
                },
                0.0,
                30.0,
                1e-14,
                1e-12,
            )
            .unwrap();
            let kernel = 4.0 * PI / (k * k);
            // H-p: ⟨W̃⟩ = (4πe²/k²)(1 - F) with F from the quadrature
            assert_relative_eq!(
                hp.first_order_fourier(k),
                -kernel * avg,
                max_relative = 1e-10
            );
            // H-H: the two-center expectation factorizes into the square
            assert_relative_eq!(
                hh.first_order_fourier(k),
                kernel * avg * avg,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn closed_forms_spot_values() {
        // R = a₀: 2e^{-2} e²/a₀
        assert_relative_eq!(
            e1_hp_closed(1.0, 1.0, 1.0).unwrap(),
            2.0 * (-2.0f64).exp(),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            e1_hp_closed(1.0, 1.0, 1.0).unwrap(),
            0.2706705664732254,
            epsilon = 1e-14
        );
        // R = 2a₀: (25/12) e^{-4} E₀
        assert_relative_eq!(
            e1_hh_closed(2.0, 1.0, 1.0).unwrap(),
            25.0 / 12.0 * (-4.0f64).exp() * -0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            e1_hh_closed(2.0, 1.0, 1.0).unwrap(),
            -0.019078790509098104,
            epsilon = 1e-13
        );
        // small-R asymptote: bare proton-proton e²/R, both systems
        for &r in &[1e-4, 1e-3] {
            assert_relative_eq!(
                e1_hp_closed(r, 1.0, 1.0).unwrap(),
                1.0 / r,
                max_relative = 1e-3
            );
            assert_relative_eq!(
                e1_hh_closed(r, 1.0, 1.0).unwrap(),
                1.0 / r,
                max_relative = 1e-2
            );
        }
        // screening completes at large R
        assert!(e1_hp_closed(40.0, 1.0, 1.0).unwrap() < 1e-30);
        assert!(e1_hp_closed(-1.0, 1.0, 1.0).is_err());
        assert!(e1_hh_closed(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hh_sign_change_location() {
        // the quartic bracket 4ρ³ + 18ρ² - 15ρ - 24 has one positive root;
        // bisect for it and check the sign flip of E⁽¹⁾ there
        let bracket = |rho: f64| 4.0 * rho.powi(3) + 18.0 * rho * rho - 15.0 * rho - 24.0;
        let (mut lo, mut hi) = (1.0, 2.0);
        assert!(bracket(lo) < 0.0 && bracket(hi) > 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if bracket(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        // E₀ < 0: positive bracket means negative energy beyond the root
        assert!(e1_hh_closed(root + 0.1, 1.0, 1.0).unwrap() < 0.0);
        assert!(e1_hh_closed(root - 0.1, 1.0, 1.0).unwrap() > 0.0);
        // both corrections are positive at small R (bare-proton repulsion)
        for &r in &[0.1, 0.25, 0.4] {
            assert!(e1_hp_closed(r, 1.0, 1.0).unwrap() > 0.0);
            assert!(e1_hh_closed(r, 1.0, 1.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn numeric_inversion_matches_closed_forms() {
        let hp = PerturbSystem::hydrogen_proton();
        let hh = PerturbSystem::hydrogen_hydrogen();
        for &r in &[0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let closed = hp.first_order_closed(r).unwrap();
            let numeric = hp.first_order_numeric(r).unwrap();
            let tol = (1e-8 * closed.abs()).max(1e-14);
            assert!(
                (numeric - closed).abs() <= tol,
                "hp R={r}: {numeric} vs {closed} (diff {:.2e})",
                (numeric - closed).abs()
            );
            let closed = hh.first_order_closed(r).unwrap();
            let numeric = hh.first_order_numeric(r).unwrap();
            let tol = (1e-8 * closed.abs()).max(1e-14);
            assert!(
                (numeric - closed).abs() <= tol,
                "hh R={r}: {numeric} vs {closed} (diff {:.2e})",
                (numeric - closed).abs()
            );
        }
        // far tail: tiny absolute value, still relatively accurate
        for s in [&hp, &hh] {
            let closed = s.first_order_closed(8.0).unwrap();
            let numeric = s.first_order_numeric(8.0).unwrap();
            assert!(closed.abs() < 1e-5);
            assert_relative_eq!(numeric, closed, max_relative = 1e-6);
        }
        assert!(hp.first_order_numeric(0.0).is_err());
    }

    #[test]
    fn bohr_radius_scaling() {
        // E⁽¹⁾ scales as e²/a₀ with R/a₀ fixed
        let base = PerturbSystem::hydrogen_proton();
        let scaled = PerturbSystem::new(PerturbKind::HydrogenProton, 2.0, 1.0).unwrap();
        let v1 = base.first_order_closed(1.5).unwrap();
        let v2 = scaled.first_order_closed(3.0).unwrap();
        assert_relative_eq!(v2, v1 / 2.0, epsilon = 1e-14);
        let n2 = scaled.first_order_numeric(3.0).unwrap();
        assert_relative_eq!(n2, v2, max_relative = 1e-9);
    }
}
