//! Electrostatic interaction energy of two density models by three
//! mutually checking routes:
//!
//! * direct double integration, reduced per component pair to a single
//!   radial quadrature through the exact single-center potentials;
//! * Fourier space, a radial k-integral of the two form factors with a
//!   spherical-Bessel weight (this route resums the contact terms);
//! * the truncated multipole series (long-range sector only).
//!
//! The closed forms for the sphere–Gaussian and sphere–exponential
//! contact energies and the distributional Laplacian ladder for
//! e^{-λr} live here as well.

use crate::bipolar::Truncation;
use crate::charge::{Component, DensityModel};
use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{double_factorial, gaunt, lower_incomplete_gamma, SphericalHarmonicTable};
use crate::vec3::Vec3;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Two charge distributions: `rho1` centered at the origin, `rho2`
/// centered at `separation`.
#[derive(Clone, Debug)]
pub struct TwoBodySystem {
    pub rho1: DensityModel,
    pub rho2: DensityModel,
    pub separation: Vec3,
}

impl TwoBodySystem {
    pub fn new(rho1: DensityModel, rho2: DensityModel, separation: Vec3) -> Self {
        TwoBodySystem {
            rho1,
            rho2,
            separation,
        }
    }

    /// The same physical system viewed from the other center.
    pub fn swapped(&self) -> Self {
        TwoBodySystem {
            rho1: self.rho2.clone(),
            rho2: self.rho1.clone(),
            separation: -self.separation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Multipole,
    Fourier,
    Direct,
    Closed,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Multipole => "multipole",
            Method::Fourier => "fourier",
            Method::Direct => "direct",
            Method::Closed => "closed",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Energy value in e²/a₀ with the route label and the route-internal
/// numerical error estimate (quadrature residual or last-shell size);
/// this bounds the route's own numerics, not model error.
#[derive(Clone, Copy, Debug)]
pub struct EnergyResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub truncation: Option<Truncation>,
}

fn j0(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// W = ∬ ρ₁(b) ρ₂(a) / |b - a - R| d³b d³a by per-pair radial
/// quadrature; accuracy target 1e-9 relative.
pub fn energy_direct(sys: &TwoBodySystem) -> Result<EnergyResult> {
    let comps1 = sys.rho1.components();
    let comps2 = sys.rho2.components();
    let mut value = 0.0;
    let mut err = 0.0;
    for c1 in &comps1 {
        for c2 in &comps2 {
            let r_eff = (sys.separation + c2.offset - c1.offset).norm();
            let (v, e) = direct_pair(c1, c2, r_eff)?;
            value += v;
            err += e;
        }
    }
    Ok(EnergyResult {
        value,
        method: Method::Direct,
        error_estimate: err,
        truncation: None,
    })
}

/// One component pair of the direct route at center distance `r`.
fn direct_pair(c1: &Component, c2: &Component, r: f64) -> Result<(f64, f64)> {
    // any point component reduces to the partner's exact potential
    match (c1.is_point(), c2.is_point()) {
        (true, true) => {
            if r == 0.0 {
                return Err(Error::Singularity(
                    "point charges at zero separation".into(),
                ));
            }
            return Ok((c1.amplitude * c2.amplitude / r, 0.0));
        }
        (true, false) => return Ok((c1.amplitude * c2.potential(r), 0.0)),
        (false, true) => return Ok((c2.amplitude * c1.potential(r), 0.0)),
        (false, false) => {}
    }
    // outer integral over the more compact component
    let (outer, inner) = if c1.support_radius(2) <= c2.support_radius(2) {
        (c1, c2)
    } else {
        (c2, c1)
    };
    let bcut = outer.support_radius(2);
    let mut edges: Vec<f64> = vec![0.0, bcut];
    let mut push = |x: f64| {
        if x > 0.0 && x < bcut {
            edges.push(x);
        }
    };
    if let crate::charge::Shape::Sphere { radius } = inner.shape {
        push(r - radius);
        push(r + radius);
        push(radius - r);
    }
    push(r);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    if r < 1e-12 * bcut.max(1.0) {
        // coincident centers: W = 4π ∫ b² ρ₁(b) φ₂(b) db
        let (v, e) = quad::adaptive_segmented(
            &mut |b: f64| 4.0 * PI * b * b * outer.density_at(b) * inner.potential(b),
            &edges,
            1e-14,
            1e-11,
        )?;
        return Ok((v, e));
    }
    // W = (2π/R) ∫ db b ρ₁(b) [Ψ₂(R+b) - Ψ₂(|R-b|)]
    let (v, e) = quad::adaptive_segmented(
        &mut |b: f64| {
            let upper = inner.potential_r_antiderivative(r + b);
            let lower = inner.potential_r_antiderivative((r - b).abs());
            2.0 * PI / r * b * outer.density_at(b) * (upper - lower)
        },
        &edges,
        1e-14,
        1e-11,
    )?;
    Ok((v, e))
}

/// W from the reciprocal-space kernel: per component pair
/// (2/π) ∫₀^∞ F₁(k) F₂(k) j₀(k R_eff) dk, the k² of the measure having
/// cancelled the 4π/k² Coulomb weight. Point–point pairs are split off
/// analytically; accuracy target 1e-8 relative.
pub fn energy_fourier(sys: &TwoBodySystem) -> Result<EnergyResult> {
    let comps1 = sys.rho1.components();
    let comps2 = sys.rho2.components();
    let mut value = 0.0;
    let mut err = 0.0;
    for c1 in &comps1 {
        for c2 in &comps2 {
            let r_eff = (sys.separation + c2.offset - c1.offset).norm();
            if c1.is_point() && c2.is_point() {
                if r_eff == 0.0 {
                    return Err(Error::Singularity(
                        "point charges at zero separation".into(),
                    ));
                }
                value += c1.amplitude * c2.amplitude / r_eff;
                continue;
            }
            let osc = r_eff + sphere_radius(c1) + sphere_radius(c2);
            let integrand = |k: f64| c1.form_factor(k) * c2.form_factor(k) * j0(k * r_eff);
            let (v, e) = if osc > 0.0 {
                quad::oscillatory_semi_infinite(integrand, PI / osc, 1e-14, 5e-13)?
            } else {
                quad::decaying_semi_infinite(
                    integrand,
                    decay_scale(c1).min(decay_scale(c2)),
                    1e-14,
                    5e-13,
                )?
            };
            value += 2.0 / PI * v;
            err += 2.0 / PI * e;
        }
    }
    Ok(EnergyResult {
        value,
        method: Method::Fourier,
        error_estimate: err,
        truncation: None,
    })
}

fn sphere_radius(c: &Component) -> f64 {
    match c.shape {
        crate::charge::Shape::Sphere { radius } => radius,
        _ => 0.0,
    }
}

fn decay_scale(c: &Component) -> f64 {
    match c.shape {
        crate::charge::Shape::Point => f64::INFINITY,
        crate::charge::Shape::Sphere { radius } => 1.0 / radius,
        crate::charge::Shape::Exponential { decay } => decay,
        crate::charge::Shape::Gaussian { exponent } => 2.0 * exponent.sqrt(),
    }
}

/// Truncated multipole series (the pointwise-smooth n = n' = 0 sector):
/// the long-range part of the energy. The error estimate is the
/// magnitude of the last retained l-shell.
pub fn energy_multipole(sys: &TwoBodySystem, t: Truncation) -> Result<EnergyResult> {
    let rn = sys.separation.norm();
    if rn == 0.0 {
        return Err(Error::Singularity(
            "multipole series is undefined at zero separation".into(),
        ));
    }
    let l_max = t.l_max;
    let msr1 = sys.rho1.msr_table(l_max, 0)?;
    let msr2 = sys.rho2.msr_table(l_max, 0)?;
    let yr = SphericalHarmonicTable::new(2 * l_max, sys.separation)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last_shell = 0.0;
    for l in 0..=l_max {
        for lp in 0..=l_max {
            let sign = if lp % 2 == 0 { 1.0 } else { -1.0 };
            let pref = sign * 4.0 * PI * (((2 * l + 1) * (2 * lp + 1)) as f64).sqrt()
                / (double_factorial(2 * l as i64 + 1)? * double_factorial(2 * lp as i64 + 1)?);
            let big = l + lp;
            let irr_scale = double_factorial(2 * big as i64 - 1)? / rn.powi(big as i32 + 1);
            let mut shell = Complex64::new(0.0, 0.0);
            for m in -(l as i32)..=l as i32 {
                for mp in -(lp as i32)..=lp as i32 {
                    let term = msr1.get(l, m, 0)
                        * msr2.get(lp, mp, 0)
                        * (gaunt(l, m, lp, mp)? * irr_scale)
                        * yr.get(big, m + mp);
                    shell += term * pref;
                }
            }
            sum += shell;
            if l == l_max || lp == l_max {
                last_shell += shell.norm();
            }
        }
    }
    Ok(EnergyResult {
        value: sum.re,
        method: Method::Multipole,
        error_estimate: last_shell,
        truncation: Some(t),
    })
}

/// Contact (overlap) contribution: the full Fourier-space energy minus
/// the truncated long-range multipole series. Decays to zero for
/// well-separated bodies.
pub fn overlap_correction(sys: &TwoBodySystem, t: Truncation) -> Result<EnergyResult> {
    let full = energy_fourier(sys)?;
    let long_range = energy_multipole(sys, t)?;
    Ok(EnergyResult {
        value: full.value - long_range.value,
        method: Method::Fourier,
        error_estimate: full.error_estimate + long_range.error_estimate,
        truncation: Some(t),
    })
}

/// Contact energy of a uniform sphere (C₁, a) and a Gaussian (C₂, λ):
/// W(R=0) = (8π²C₁C₂/3λ) a³ e^{-λa²} + (4π²C₁C₂/λ^{3/2}) a² γ(3/2, λa²)
///          - (4π²C₁C₂/3λ^{3/2}) a² γ(5/2, λa²).
pub fn closed_sphere_gaussian(c1: f64, c2: f64, a: f64, lam: f64) -> Result<f64> {
    if a <= 0.0 || lam <= 0.0 {
        return Err(Error::Domain(format!(
            "need a > 0 and λ > 0, got a={a}, λ={lam}"
        )));
    }
    let x = lam * a * a;
    let g32 = lower_incomplete_gamma(1.5, x)?;
    let g52 = lower_incomplete_gamma(2.5, x)?;
    Ok(
        8.0 * PI * PI * c1 * c2 / (3.0 * lam) * a.powi(3) * (-x).exp()
            + 4.0 * PI * PI * c1 * c2 / lam.powf(1.5) * a * a * g32
            - 4.0 * PI * PI * c1 * c2 / (3.0 * lam.powf(1.5)) * a * a * g52,
    )
}

/// The two-term series for the sphere–Gaussian contact energy as
/// displayed: 8C₁C₂a³π/(3λ) - 8π²C₁C₂a⁵/15.
///
/// The displayed leading term disagrees by a factor of π with the
/// small-a expansion of [`closed_sphere_gaussian`] (whose a³
/// coefficient is 8π²/(3λ), matching the physical limit q₁·φ₂(0));
/// the second term agrees. The exact expression is authoritative —
/// this series is reproduced for reference only.
pub fn taylor_sphere_gaussian(c1: f64, c2: f64, a: f64, lam: f64, terms: u32) -> Result<f64> {
    if a < 0.0 || lam <= 0.0 {
        return Err(Error::Domain(format!(
            "need a >= 0 and λ > 0, got a={a}, λ={lam}"
        )));
    }
    if terms == 0 || terms > 2 {
        return Err(Error::Domain(format!(
            "series is displayed to two terms, got {terms}"
        )));
    }
    let mut w = 8.0 * c1 * c2 * a.powi(3) * PI / (3.0 * lam);
    if terms == 2 {
        w -= 8.0 * PI * PI * c1 * c2 / 15.0 * a.powi(5);
    }
    Ok(w)
}

/// Contact energy of a uniform sphere (C₁, a) and an exponential
/// (C₂, λ): W(R=0) = (16π²C₁C₂/λ⁵)(e^{-λa}(λa+2)² + λ²a² - 4).
pub fn closed_sphere_exponential(c1: f64, c2: f64, a: f64, lam: f64) -> Result<f64> {
    if a <= 0.0 || lam <= 0.0 {
        return Err(Error::Domain(format!(
            "need a > 0 and λ > 0, got a={a}, λ={lam}"
        )));
    }
    let x = lam * a;
    Ok(16.0 * PI * PI * c1 * c2 / lam.powi(5) * ((-x).exp() * (x + 2.0) * (x + 2.0) + x * x - 4.0))
}

/// Exact coefficient c · λ^power with c an integer (the ladder never
/// produces non-integer rationals).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaPower {
    pub coeff: i128,
    pub power: u32,
}

impl LambdaPower {
    pub fn eval(&self, lambda: f64) -> f64 {
        self.coeff as f64 * lambda.powi(self.power as i32)
    }
}

/// Distributional form of Δ^j e^{-λr}: a smooth part
/// α e^{-λr}/r + β e^{-λr} plus delta terms Σ c_j Δ^j δ(r), kept as
/// exact integer coefficients in λ (delta coefficients carry one
/// factor of π).
#[derive(Clone, Debug)]
pub struct DeltaSeries {
    lambda: f64,
    smooth_over_r: LambdaPower,
    smooth_plain: LambdaPower,
    delta_terms: Vec<(u32, LambdaPower)>,
}

impl DeltaSeries {
    /// Level j = 0: the bare exponential.
    pub fn seed(lambda: f64) -> Self {
        DeltaSeries {
            lambda,
            smooth_over_r: LambdaPower { coeff: 0, power: 1 },
            smooth_plain: LambdaPower { coeff: 1, power: 0 },
            delta_terms: Vec::new(),
        }
    }

    /// One more Laplacian:
    /// Δ(e^{-λr})   = -2λ e^{-λr}/r + λ² e^{-λr}
    /// Δ(e^{-λr}/r) = λ² e^{-λr}/r - 4π δ(r)
    /// and each existing Δ^j δ steps to Δ^{j+1} δ.
    pub fn apply_laplacian(&self) -> DeltaSeries {
        let a = self.smooth_over_r;
        let b = self.smooth_plain;
        let smooth_over_r = LambdaPower {
            coeff: a.coeff - 2 * b.coeff,
            power: b.power + 1,
        };
        let smooth_plain = LambdaPower {
            coeff: b.coeff,
            power: b.power + 2,
        };
        let mut delta_terms: Vec<(u32, LambdaPower)> =
            self.delta_terms.iter().map(|&(j, c)| (j + 1, c)).collect();
        if a.coeff != 0 {
            delta_terms.push((
                0,
                LambdaPower {
                    coeff: -4 * a.coeff,
                    power: a.power,
                },
            ));
        }
        delta_terms.sort_by_key(|&(j, _)| j);
        DeltaSeries {
            lambda: self.lambda,
            smooth_over_r,
            smooth_plain,
            delta_terms,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Coefficient of e^{-λr}/r, numerically.
    pub fn smooth_over_r(&self) -> f64 {
        self.smooth_over_r.eval(self.lambda)
    }

    /// Coefficient of e^{-λr}, numerically.
    pub fn smooth_plain(&self) -> f64 {
        self.smooth_plain.eval(self.lambda)
    }

    /// Delta ladder as (laplacian power j, coefficient of Δ^j δ),
    /// numerically (the π factor included).
    pub fn delta_terms(&self) -> Vec<(u32, f64)> {
        self.delta_terms
            .iter()
            .map(|&(j, c)| (j, PI * c.eval(self.lambda)))
            .collect()
    }

    /// Exact integer bookkeeping behind the three accessors; delta
    /// coefficients are in units of π.
    pub fn smooth_over_r_exact(&self) -> LambdaPower {
        self.smooth_over_r
    }

    pub fn smooth_plain_exact(&self) -> LambdaPower {
        self.smooth_plain
    }

    pub fn delta_terms_exact(&self) -> &[(u32, LambdaPower)] {
        &self.delta_terms
    }

    /// Pointwise value of the smooth part at r > 0.
    pub fn smooth_at(&self, r: f64) -> f64 {
        (self.smooth_over_r() / r + self.smooth_plain()) * (-self.lambda * r).exp()
    }
}

/// Coefficients of Δ^j e^{-λr} in the distributional sense, j >= 1.
pub fn distributional_laplacian_exp(j: u32, lambda: f64) -> Result<DeltaSeries> {
    if j < 1 {
        return Err(Error::Domain("the ladder starts at j = 1".into()));
    }
    if lambda <= 0.0 {
        return Err(Error::Domain(format!("need λ > 0, got {lambda}")));
    }
    let mut s = DeltaSeries::seed(lambda);
    for _ in 0..j {
        s = s.apply_laplacian();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sys(rho1: DensityModel, rho2: DensityModel, r: [f64; 3]) -> TwoBodySystem {
        TwoBodySystem::new(rho1, rho2, r.into())
    }

    #[test]
    fn point_pairs_are_coulomb() {
        let s = sys(
            DensityModel::point(2.0),
            DensityModel::point(-1.5),
            [0.0, 0.0, 2.5],
        );
        let d = energy_direct(&s).unwrap();
        assert_relative_eq!(d.value, -3.0 / 2.5, epsilon = 1e-14);
        let f = energy_fourier(&s).unwrap();
        assert_relative_eq!(f.value, -3.0 / 2.5, epsilon = 1e-12);
        let m = energy_multipole(&s, Truncation::new(4, 0)).unwrap();
        assert_relative_eq!(m.value, -3.0 / 2.5, epsilon = 1e-12);
        // coincident point charges are singular
        let s0 = sys(DensityModel::point(1.0), DensityModel::point(1.0), [0.0; 3]);
        assert!(energy_direct(&s0).is_err());
        assert!(energy_fourier(&s0).is_err());
    }

    #[test]
    fn direct_symmetry_under_swap() {
        let s = sys(
            DensityModel::uniform_sphere(1.0, 1.0).unwrap(),
            DensityModel::exponential(0.7, 1.3).unwrap(),
            [0.4, -0.2, 1.1],
        );
        let a = energy_direct(&s).unwrap().value;
        let b = energy_direct(&s.swapped()).unwrap().value;
        assert_relative_eq!(a, b, max_relative = 1e-11);
        let af = energy_fourier(&s).unwrap().value;
        let bf = energy_fourier(&s.swapped()).unwrap().value;
        assert_relative_eq!(af, bf, max_relative = 1e-11);
        assert_relative_eq!(a, af, max_relative = 1e-9);
    }

    #[test]
    fn routes_agree_for_offset_superpositions() {
        // every component pair sees its own effective separation
        let rho1 = DensityModel::superposition(vec![
            DensityModel::point(0.6).with_offset(Vec3::new(0.2, -0.1, 0.15)),
            DensityModel::gaussian(0.8, 1.4).unwrap().with_offset(Vec3::new(-0.3, 0.2, 0.0)),
        ])
        .unwrap();
        let rho2 = DensityModel::superposition(vec![
            DensityModel::exponential(0.9, 1.2).unwrap().with_offset(Vec3::new(0.1, 0.25, -0.2)),
            DensityModel::uniform_sphere(0.5, 0.7).unwrap().with_offset(Vec3::new(0.0, -0.15, 0.3)),
        ])
        .unwrap();
        for &r in &[[0.0, 0.0, 0.9], [0.5, -0.4, 1.8], [0.0, 0.0, 6.0]] {
            let s = sys(rho1.clone(), rho2.clone(), r);
            let d = energy_direct(&s).unwrap().value;
            let f = energy_fourier(&s).unwrap().value;
            assert_relative_eq!(d, f, max_relative = 1e-8);
        }
        // with the slowly decaying exponential tail the long-range series
        // is missing a visible contact piece at R = 6
        let s = sys(rho1.clone(), rho2, [0.0, 0.0, 6.0]);
        let oc = overlap_correction(&s, Truncation::new(10, 0)).unwrap().value;
        assert!(oc.abs() > 1e-3, "exponential tails overlap at R=6: {oc}");
        // for gaussian/compact tails the contact term is dead and the
        // multipole series meets the direct route
        let rho2g = DensityModel::superposition(vec![
            DensityModel::gaussian(0.9, 1.2).unwrap().with_offset(Vec3::new(0.1, 0.25, -0.2)),
            DensityModel::uniform_sphere(0.5, 0.7).unwrap().with_offset(Vec3::new(0.0, -0.15, 0.3)),
        ])
        .unwrap();
        let s = sys(rho1, rho2g, [0.0, 0.0, 6.0]);
        let d = energy_direct(&s).unwrap().value;
        let m = energy_multipole(&s, Truncation::new(10, 0)).unwrap().value;
        assert_relative_eq!(d, m, max_relative = 1e-7);
    }

    #[test]
    fn sphere_gaussian_contact_value() {
        // independent quadrature oracle: 4π^{5/2} ∫_0^1 r erf(r) dr
        let (oracle, _) = quad::adaptive(
            |r: f64| 4.0 * PI.powf(2.5) * r * libm::erf(r),
            0.0,
            1.0,
            1e-14,
            1e-14,
        )
        .unwrap();
        let w = closed_sphere_gaussian(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(w, oracle, max_relative = 1e-12);
        assert_relative_eq!(w, 22.00336659940247, max_relative = 1e-12);
        // bilinearity in the amplitudes
        assert_relative_eq!(
            closed_sphere_gaussian(2.0, -0.5, 1.0, 1.0).unwrap(),
            -w,
            max_relative = 1e-13
        );
        // small-a leading behavior: q₁ φ₂(0) = (4πC₁a³/3)(2πC₂/λ)
        let a: f64 = 1e-2;
        let lead = 8.0 * PI * PI / 3.0 * a.powi(3);
        assert_relative_eq!(
            closed_sphere_gaussian(1.0, 1.0, a, 1.0).unwrap(),
            lead,
            max_relative = 1e-3
        );
        assert!(closed_sphere_gaussian(1.0, 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn sphere_gaussian_matches_routes_at_contact() {
        let s = sys(
            DensityModel::uniform_sphere(1.0, 1.0).unwrap(),
            DensityModel::gaussian(1.0, 1.0).unwrap(),
            [0.0; 3],
        );
        let w = closed_sphere_gaussian(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(energy_direct(&s).unwrap().value, w, max_relative = 1e-9);
        assert_relative_eq!(energy_fourier(&s).unwrap().value, w, max_relative = 1e-9);
    }

    #[test]
    fn taylor_series_as_displayed() {
        // first displayed term, unit parameters
        assert_relative_eq!(
            taylor_sphere_gaussian(1.0, 1.0, 1.0, 1.0, 1).unwrap(),
            8.0 * PI / 3.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            taylor_sphere_gaussian(1.0, 1.0, 1.0, 1.0, 2).unwrap(),
            8.0 * PI / 3.0 - 8.0 * PI * PI / 15.0,
            epsilon = 1e-13
        );
        assert_eq!(taylor_sphere_gaussian(1.0, 1.0, 0.0, 1.0, 2).unwrap(), 0.0);
        assert!(taylor_sphere_gaussian(1.0, 1.0, 1.0, 1.0, 3).is_err());
        // the small-a expansion of the exact result carries 8π²/(3λ) a³,
        // a factor π away from the displayed first term
        let a = 1e-3;
        let exact_lead = closed_sphere_gaussian(1.0, 1.0, a, 1.0).unwrap() / a.powi(3);
        assert_relative_eq!(exact_lead, 8.0 * PI * PI / 3.0, max_relative = 1e-4);
        let displayed_lead = taylor_sphere_gaussian(1.0, 1.0, a, 1.0, 1).unwrap() / a.powi(3);
        assert_relative_eq!(displayed_lead * PI, exact_lead, max_relative = 1e-4);
    }

    #[test]
    fn sphere_exponential_contact_value() {
        let w = closed_sphere_exponential(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            w,
            16.0 * PI * PI * (9.0 * (-1.0f64).exp() - 3.0),
            max_relative = 1e-13
        );
        let s = sys(
            DensityModel::uniform_sphere(1.0, 1.0).unwrap(),
            DensityModel::exponential(1.0, 1.0).unwrap(),
            [0.0; 3],
        );
        assert_relative_eq!(energy_direct(&s).unwrap().value, w, max_relative = 1e-10);
        assert_relative_eq!(energy_fourier(&s).unwrap().value, w, max_relative = 1e-9);
        // vanishing sphere: O(a³) leading behavior q₁ φ₂(0)
        let a: f64 = 1e-2;
        let lead = 16.0 * PI * PI / 3.0 * a.powi(3);
        assert_relative_eq!(
            closed_sphere_exponential(1.0, 1.0, a, 1.0).unwrap(),
            lead,
            max_relative = 1e-2
        );
        // λ → large: the density concentrates and the value decays like
        // 16π²a²/λ³ (the total charge of ρ₂ shrinks as 8πC₂/λ³)
        let w40 = closed_sphere_exponential(1.0, 1.0, 1.0, 40.0).unwrap();
        let w80 = closed_sphere_exponential(1.0, 1.0, 1.0, 80.0).unwrap();
        assert_relative_eq!(w80 / w40, 0.125, max_relative = 1e-2);
        assert_relative_eq!(w40, 16.0 * PI * PI / 40.0f64.powi(3), max_relative = 3e-3);
    }

    #[test]
    fn multipole_reduces_to_coulomb_for_spherical_bodies() {
        let s = sys(
            DensityModel::uniform_sphere(1.0, 1.0).unwrap(),
            DensityModel::gaussian(1.0, 1.0).unwrap(),
            [0.0, 0.0, 10.0],
        );
        let q1 = s.rho1.total_charge();
        let q2 = s.rho2.total_charge();
        for l_max in [0u32, 2, 5] {
            let m = energy_multipole(&s, Truncation::new(l_max, 0)).unwrap();
            assert_relative_eq!(m.value, q1 * q2 / 10.0, max_relative = 1e-12);
        }
        // at R = 10 >> radii the direct route agrees and the overlap
        // correction is negligible
        let d = energy_direct(&s).unwrap();
        assert_relative_eq!(d.value, q1 * q2 / 10.0, max_relative = 1e-9);
        let oc = overlap_correction(&s, Truncation::new(4, 0)).unwrap();
        assert!(oc.value.abs() < 1e-10 * d.value.abs());
    }

    #[test]
    fn overlap_is_the_whole_hydrogen_interaction() {
        // the long-range multipole part of two neutral spherical atoms is
        // identically zero, so the contact correction carries everything
        let s = sys(
            DensityModel::hydrogen1s(1.0, 1.0).unwrap(),
            DensityModel::hydrogen1s(1.0, 1.0).unwrap(),
            [0.0, 0.0, 2.0],
        );
        let oc = overlap_correction(&s, Truncation::new(4, 0)).unwrap();
        let closed = crate::perturb::e1_hh_closed(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(oc.value, closed, max_relative = 1e-8);
        let m = energy_multipole(&s, Truncation::new(4, 0)).unwrap();
        assert!(m.value.abs() < 1e-13);
    }

    #[test]
    fn overlap_correction_vanishes_for_points() {
        let s = sys(
            DensityModel::point(1.0),
            DensityModel::point(1.0),
            [0.0, 0.0, 3.0],
        );
        let oc = overlap_correction(&s, Truncation::new(3, 0)).unwrap();
        assert!(oc.value.abs() < 1e-10);
    }

    #[test]
    fn multipole_offset_point_expansion() {
        // point at an offset inside body 2: series converges to Coulomb
        // between the two actual point locations
        let d = Vec3::new(0.2, -0.1, 0.3);
        let s = TwoBodySystem::new(
            DensityModel::point(1.3),
            DensityModel::point(-0.8).with_offset(d),
            Vec3::new(0.0, 0.0, 2.0),
        );
        let exact = 1.3 * -0.8 / (s.separation + d).norm();
        let m = energy_multipole(&s, Truncation::new(12, 0)).unwrap();
        assert_relative_eq!(m.value, exact, max_relative = 1e-9);
        assert!(energy_multipole(
            &TwoBodySystem::new(
                DensityModel::point(1.0),
                DensityModel::point(1.0),
                Vec3::default()
            ),
            Truncation::new(2, 0)
        )
        .is_err());
    }

    #[test]
    fn bilinearity_in_amplitudes() {
        let base = sys(
            DensityModel::gaussian(1.0, 1.1).unwrap(),
            DensityModel::exponential(1.0, 0.9).unwrap(),
            [0.0, 0.0, 1.2],
        );
        let scaled = sys(
            DensityModel::gaussian(2.5, 1.1).unwrap(),
            DensityModel::exponential(-0.4, 0.9).unwrap(),
            [0.0, 0.0, 1.2],
        );
        for route in [energy_direct, energy_fourier] {
            let a = route(&base).unwrap().value;
            let b = route(&scaled).unwrap().value;
            assert_relative_eq!(b, 2.5 * -0.4 * a, max_relative = 1e-11);
        }
    }

    #[test]
    fn delta_ladder_exact_coefficients() {
        // Δ e^{-λr} = -2λ e^{-λr}/r + λ² e^{-λr}
        let s1 = distributional_laplacian_exp(1, 1.0).unwrap();
        assert_eq!(
            s1.smooth_over_r_exact(),
            LambdaPower {
                coeff: -2,
                power: 1
            }
        );
        assert_eq!(s1.smooth_plain_exact(), LambdaPower { coeff: 1, power: 2 });
        assert!(s1.delta_terms_exact().is_empty());
        // Δ² e^{-λr} = -4λ³ e^{-λr}/r + λ⁴ e^{-λr} + 8πλ δ
        let s2 = distributional_laplacian_exp(2, 1.0).unwrap();
        assert_eq!(
            s2.smooth_over_r_exact(),
            LambdaPower {
                coeff: -4,
                power: 3
            }
        );
        assert_eq!(s2.smooth_plain_exact(), LambdaPower { coeff: 1, power: 4 });
        assert_eq!(
            s2.delta_terms_exact(),
            &[(0, LambdaPower { coeff: 8, power: 1 })]
        );
        // Δ³ e^{-λr} = -6λ⁵ e^{-λr}/r + λ⁶ e^{-λr} + 16πλ³ δ + 8πλ Δδ
        let s3 = distributional_laplacian_exp(3, 1.0).unwrap();
        assert_eq!(
            s3.smooth_over_r_exact(),
            LambdaPower {
                coeff: -6,
                power: 5
            }
        );
        assert_eq!(s3.smooth_plain_exact(), LambdaPower { coeff: 1, power: 6 });
        assert_eq!(
            s3.delta_terms_exact(),
            &[
                (
                    0,
                    LambdaPower {
                        coeff: 16,
                        power: 3
                    }
                ),
                (1, LambdaPower { coeff: 8, power: 1 })
            ]
        );
        assert!(distributional_laplacian_exp(0, 1.0).is_err());
    }

    #[test]
    fn delta_ladder_smooth_part_matches_radial_laplacian() {
        // numerical Δf = f'' + 2 f'/r of level j reproduces level j+1
        let lam = 1.3;
        for j in 1..=4u32 {
            let cur = distributional_laplacian_exp(j, lam).unwrap();
            let next = cur.apply_laplacian();
            let r = 0.8;
            let h = 1e-4;
            let f = |x: f64| cur.smooth_at(x);
            let lap = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)
                + 2.0 / r * (f(r + h) - f(r - h)) / (2.0 * h);
            assert_relative_eq!(lap, next.smooth_at(r), max_relative = 1e-6);
        }
    }

    #[test]
    fn long_range_limit_charged_bodies() {
        let s = sys(
            DensityModel::gaussian(0.8, 1.0).unwrap(),
            DensityModel::exponential(0.5, 1.2).unwrap(),
            [0.0, 0.0, 30.0],
        );
        let q1 = s.rho1.total_charge();
        let q2 = s.rho2.total_charge();
        let w = energy_fourier(&s).unwrap().value;
        assert_relative_eq!(w * 30.0 / (q1 * q2), 1.0, max_relative = 1e-9);
    }
}
