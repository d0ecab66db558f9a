//! Analytic charge-density models: total charge, Fourier transforms
//! (form factors), and spherical / Cartesian mean square radii.
//!
//! Units are unrationalized Gaussian with e = a₀ = 1; energies built on
//! these densities come out in e²/a₀.

use crate::deriv::InverseRadialDerivs;
use crate::error::{Error, Result};
use crate::poly::{solid_harmonic_poly, Poly3};
use crate::quad;
use crate::specfun::{double_factorial, factorial, gamma, regular_solid_harmonic, AngularIndex};
use crate::vec3::Vec3;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Tagged analytic charge distribution. `offset` displaces a component
/// from the distribution's own center (the center itself is placed by
/// the two-body geometry, not here).
#[derive(Clone, Debug, PartialEq)]
pub enum DensityModel {
    /// q δ³(r - offset)
    Point {
        charge: f64,
        offset: Vec3,
    },
    /// C θ(a - |r - offset|)
    UniformSphere {
        amplitude: f64,
        radius: f64,
        offset: Vec3,
    },
    /// C e^{-λ|r - offset|}
    Exponential {
        amplitude: f64,
        decay: f64,
        offset: Vec3,
    },
    /// C e^{-λ|r - offset|²}
    Gaussian {
        amplitude: f64,
        exponent: f64,
        offset: Vec3,
    },
    /// Neutral hydrogen ground state: point proton +e plus the 1s
    /// electron cloud -e |Ψ|² = -(e/π a₀³) e^{-2r/a₀}.
    Hydrogen1s {
        charge: f64,
        bohr_radius: f64,
        offset: Vec3,
    },
    Superposition {
        children: Vec<DensityModel>,
    },
}

impl DensityModel {
    pub fn point(charge: f64) -> Self {
        DensityModel::Point {
            charge,
            offset: Vec3::default(),
        }
    }

    pub fn uniform_sphere(amplitude: f64, radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::Domain(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        Ok(DensityModel::UniformSphere {
            amplitude,
            radius,
            offset: Vec3::default(),
        })
    }

    pub fn exponential(amplitude: f64, decay: f64) -> Result<Self> {
        if decay <= 0.0 {
            return Err(Error::Domain(format!(
                "decay rate must be positive, got {decay}"
            )));
        }
        Ok(DensityModel::Exponential {
            amplitude,
            decay,
            offset: Vec3::default(),
        })
    }

    pub fn gaussian(amplitude: f64, exponent: f64) -> Result<Self> {
        if exponent <= 0.0 {
            return Err(Error::Domain(format!(
                "gaussian exponent must be positive, got {exponent}"
            )));
        }
        Ok(DensityModel::Gaussian {
            amplitude,
            exponent,
            offset: Vec3::default(),
        })
    }

    pub fn hydrogen1s(charge: f64, bohr_radius: f64) -> Result<Self> {
        if bohr_radius <= 0.0 {
            return Err(Error::Domain(format!(
                "Bohr radius must be positive, got {bohr_radius}"
            )));
        }
        Ok(DensityModel::Hydrogen1s {
            charge,
            bohr_radius,
            offset: Vec3::default(),
        })
    }

    pub fn superposition(children: Vec<DensityModel>) -> Result<Self> {
        if children.is_empty() {
            return Err(Error::Domain(
                "superposition needs at least one child".into(),
            ));
        }
        Ok(DensityModel::Superposition { children })
    }

    pub fn with_offset(mut self, d: Vec3) -> Self {
        match &mut self {
            DensityModel::Point { offset, .. }
            | DensityModel::UniformSphere { offset, .. }
            | DensityModel::Exponential { offset, .. }
            | DensityModel::Gaussian { offset, .. }
            | DensityModel::Hydrogen1s { offset, .. } => *offset = d,
            DensityModel::Superposition { children } => {
                for c in children.iter_mut() {
                    let cur = c.clone();
                    *c = cur.shifted(d);
                }
            }
        }
        self
    }

    fn shifted(self, d: Vec3) -> Self {
        match self {
            DensityModel::Point { charge, offset } => DensityModel::Point {
                charge,
                offset: offset + d,
            },
            DensityModel::UniformSphere {
                amplitude,
                radius,
                offset,
            } => DensityModel::UniformSphere {
                amplitude,
                radius,
                offset: offset + d,
            },
            DensityModel::Exponential {
                amplitude,
                decay,
                offset,
            } => DensityModel::Exponential {
                amplitude,
                decay,
                offset: offset + d,
            },
            DensityModel::Gaussian {
                amplitude,
                exponent,
                offset,
            } => DensityModel::Gaussian {
                amplitude,
                exponent,
                offset: offset + d,
            },
            DensityModel::Hydrogen1s {
                charge,
                bohr_radius,
                offset,
            } => DensityModel::Hydrogen1s {
                charge,
                bohr_radius,
                offset: offset + d,
            },
            DensityModel::Superposition { children } => DensityModel::Superposition {
                children: children.into_iter().map(|c| c.shifted(d)).collect(),
            },
        }
    }

    /// Flatten to centered components with accumulated offsets.
    pub(crate) fn components(&self) -> Vec<Component> {
        let mut out = Vec::new();
        self.collect_components(&mut out);
        out
    }

    fn collect_components(&self, out: &mut Vec<Component>) {
        match self {
            DensityModel::Point { charge, offset } => out.push(Component {
                amplitude: *charge,
                shape: Shape::Point,
                offset: *offset,
            }),
            DensityModel::UniformSphere {
                amplitude,
                radius,
                offset,
            } => out.push(Component {
                amplitude: *amplitude,
                shape: Shape::Sphere { radius: *radius },
                offset: *offset,
            }),
            DensityModel::Exponential {
                amplitude,
                decay,
                offset,
            } => out.push(Component {
                amplitude: *amplitude,
                shape: Shape::Exponential { decay: *decay },
                offset: *offset,
            }),
            DensityModel::Gaussian {
                amplitude,
                exponent,
                offset,
            } => out.push(Component {
                amplitude: *amplitude,
                shape: Shape::Gaussian {
                    exponent: *exponent,
                },
                offset: *offset,
            }),
            DensityModel::Hydrogen1s {
                charge,
                bohr_radius,
                offset,
            } => {
                out.push(Component {
                    amplitude: *charge,
                    shape: Shape::Point,
                    offset: *offset,
                });
                out.push(Component {
                    amplitude: -charge / (PI * bohr_radius.powi(3)),
                    shape: Shape::Exponential {
                        decay: 2.0 / bohr_radius,
                    },
                    offset: *offset,
                });
            }
            DensityModel::Superposition { children } => {
                for c in children {
                    c.collect_components(out);
                }
            }
        }
    }

    /// Smooth part of ρ at `r`; errors when the model has no smooth part
    /// at all (a pure point charge has no pointwise value).
    pub fn eval_density(&self, r: Vec3) -> Result<f64> {
        let comps = self.components();
        if comps.iter().all(|c| matches!(c.shape, Shape::Point)) {
            return Err(Error::Unsupported(
                "pointwise density of a pure point charge".into(),
            ));
        }
        Ok(comps
            .iter()
            .map(|c| c.density_at((r - c.offset).norm()))
            .sum())
    }

    /// ∫ ρ d³r, analytic per component.
    pub fn total_charge(&self) -> f64 {
        self.components().iter().map(Component::total_charge).sum()
    }

    /// ρ̃(k) = ∫ e^{i k·r} ρ(r) d³r; offsets enter as phase factors.
    pub fn fourier(&self, k: Vec3) -> Complex64 {
        let kn = k.norm();
        self.components()
            .iter()
            .map(|c| Complex64::from_polar(1.0, k.dot(c.offset)) * c.form_factor(kn))
            .sum()
    }

    /// Radial overload of [`Self::fourier`] with k taken along +z.
    pub fn radial_fourier(&self, k: f64) -> Complex64 {
        self.fourier(Vec3::new(0.0, 0.0, k))
    }

    /// Spherical mean square radius
    /// r̄_{lm}^{2n} = sqrt(4π/(2l+1)) ∫ r^{l+2n} conj(Y_lm(r̂)) ρ(r) d³r,
    /// analytic for every supported kind (all moments are finite).
    pub fn msr_spherical(&self, l: u32, m: i32, n: u32) -> Result<Complex64> {
        let idx = AngularIndex::new(l, m)?;
        let norm = (4.0 * PI / (2 * l + 1) as f64).sqrt();
        let f = solid_harmonic_poly(idx)?
            .conjugated()
            .mul(&Poly3::radius_squared_power(n))
            .scaled(Complex64::new(norm, 0.0));
        // components sitting on the center have no l >= 1 moments at all;
        // skipping them keeps the zero exact instead of moment-scale noise
        Ok(self
            .components()
            .iter()
            .filter(|c| l == 0 || !c.offset.is_zero())
            .map(|c| c.poly_moment(&f))
            .sum())
    }

    /// Quadrature route for the spherical MSR: pointwise density sampling
    /// under an adaptive radial rule and a Gauss–Legendre × trapezoid
    /// angular product rule. Serves as the independent cross-check of
    /// [`Self::msr_spherical`].
    pub fn msr_spherical_quadrature(&self, l: u32, m: i32, n: u32) -> Result<Complex64> {
        let idx = AngularIndex::new(l, m)?;
        let norm = (4.0 * PI / (2 * l + 1) as f64).sqrt();
        let weight = |v: Vec3| -> Complex64 {
            // |v|^{l+2n} conj(Y_lm(v̂)) = conj(solid) · |v|^{2n}
            regular_solid_harmonic(idx, v)
                .expect("finite at every point")
                .conj()
                * v.norm_squared().powi(n as i32)
        };
        let deg = l + 2 * n;
        let n_theta = (deg + 4) as usize;
        let n_phi = (2 * deg + 6) as usize;
        let (nodes, wts) = quad::gauss_legendre(n_theta);
        let mut total = Complex64::new(0.0, 0.0);
        for c in self.components() {
            match c.shape {
                Shape::Point => total += weight(c.offset) * c.amplitude,
                _ => {
                    let rcut = c.support_radius(deg);
                    let angular = |s: f64| -> Complex64 {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (ct, w) in nodes.iter().zip(&wts) {
                            let st = (1.0 - ct * ct).sqrt();
                            for p in 0..n_phi {
                                let phi = 2.0 * PI * p as f64 / n_phi as f64;
                                let dir = Vec3::new(st * phi.cos(), st * phi.sin(), *ct);
                                acc += weight(c.offset + dir * s) * *w;
                            }
                        }
                        acc * (2.0 * PI / n_phi as f64)
                    };
                    // absolute target scaled to the unsigned moment: the
                    // angular projection can cancel to far below the
                    // integrand magnitude
                    let scale = 4.0 * PI * c.radial_moment(deg).abs();
                    let (v, _) = quad::adaptive(
                        |s: f64| angular(s) * (s * s * c.density_at(s)),
                        0.0,
                        rcut,
                        (1e-13 * scale).max(1e-16),
                        1e-11,
                    )?;
                    total += v;
                }
            }
        }
        Ok(total * norm)
    }

    /// Table of spherical MSRs for all l <= l_max, |m| <= l, n <= n_max.
    pub fn msr_table(&self, l_max: u32, n_max: u32) -> Result<SphericalMsr> {
        let mut entries =
            vec![Complex64::new(0.0, 0.0); ((n_max + 1) * (l_max + 1) * (l_max + 1)) as usize];
        for n in 0..=n_max {
            for l in 0..=l_max {
                for m in -(l as i32)..=l as i32 {
                    entries[SphericalMsr::index(l_max, l, m, n)] = self.msr_spherical(l, m, n)?;
                }
            }
        }
        Ok(SphericalMsr {
            l_max,
            n_max,
            entries,
        })
    }

    /// Cartesian mean square radius tensor of rank l, order n:
    /// components ((-1)^l/(2l-1)!!) ∫ r^{2l+2n+1} ρ ∂_{i₁}..∂_{i_l}(1/r) d³r
    /// in compressed (p_x, p_y, p_z) storage.
    pub fn msr_cartesian(&self, l: u32, n: u32) -> Result<CartesianMsr> {
        let derivs = InverseRadialDerivs::new(l);
        let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        let scale = sign / double_factorial(2 * l as i64 - 1)?;
        let r2n = Poly3::radius_squared_power(n);
        // the kernel ∂^p(1/r) is a pure order-l harmonic, so centered
        // components carry exactly zero for l >= 1 (see msr_spherical)
        let comps: Vec<Component> = self
            .components()
            .into_iter()
            .filter(|c| l == 0 || !c.offset.is_zero())
            .collect();
        let mut components = BTreeMap::new();
        for p in exponent_triples(l) {
            // r^{2l+2n+1} ∂^p(1/r) = numerator(p) · r^{2n}
            let f = derivs
                .numerator_poly(p)
                .mul(&r2n)
                .scaled(Complex64::new(scale, 0.0));
            let value: Complex64 = comps.iter().map(|c| c.poly_moment(&f)).sum();
            components.insert(p, value.re);
        }
        Ok(CartesianMsr {
            rank: l,
            order: n,
            components,
        })
    }

    /// Natural magnitude of the (l, n) moment before any angular
    /// cancellation: Σ_components 4π |∫ s^{l+2n+2} ρ ds| (point
    /// components contribute |q| d^{l+2n}). Used to scale tolerance
    /// checks on entries that cancel to zero.
    pub fn msr_scale(&self, l: u32, n: u32) -> f64 {
        let p = l + 2 * n;
        self.components()
            .iter()
            .map(|c| {
                if c.is_point() {
                    let d = c.offset.norm();
                    c.amplitude.abs() * if p == 0 { 1.0 } else { d.powi(p as i32) }
                } else {
                    4.0 * PI * c.radial_moment(p).abs()
                }
            })
            .sum()
    }
}

/// All (p_x, p_y, p_z) with p_x + p_y + p_z = l, in lexicographic order.
pub fn exponent_triples(l: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for px in 0..=l {
        for py in 0..=(l - px) {
            out.push((px, py, l - px - py));
        }
    }
    out
}

/// Monopole moments of the hydrogen 1s density: ⟨r^{2n}⟩ over |Ψ⁽⁰⁾|²
/// equals a₀^{2n} (2n+2)!/2^{2n+1}.
pub fn hydrogen_even_moment(n: u32, bohr_radius: f64) -> f64 {
    bohr_radius.powi(2 * n as i32) * factorial(2 * n + 2) / 2f64.powi(2 * n as i32 + 1)
}

/// ∫ ŝ_x^i ŝ_y^j ŝ_z^k dΩ: zero unless all exponents are even, else
/// 4π (i-1)!!(j-1)!!(k-1)!!/(i+j+k+1)!!.
fn angular_monomial_integral(i: u32, j: u32, k: u32) -> f64 {
    if i % 2 == 1 || j % 2 == 1 || k % 2 == 1 {
        return 0.0;
    }
    let df = |x: u32| double_factorial(x as i64 - 1).expect("nonnegative");
    4.0 * PI * df(i) * df(j) * df(k) / double_factorial((i + j + k + 1) as i64).expect("odd")
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Shape {
    Point,
    Sphere { radius: f64 },
    Exponential { decay: f64 },
    Gaussian { exponent: f64 },
}

/// One centered analytic component of a flattened model.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Component {
    pub amplitude: f64,
    pub shape: Shape,
    pub offset: Vec3,
}

impl Component {
    pub fn is_point(&self) -> bool {
        matches!(self.shape, Shape::Point)
    }

    pub fn total_charge(&self) -> f64 {
        match self.shape {
            Shape::Point => self.amplitude,
            Shape::Sphere { radius } => 4.0 * PI * self.amplitude * radius.powi(3) / 3.0,
            Shape::Exponential { decay } => 8.0 * PI * self.amplitude / decay.powi(3),
            Shape::Gaussian { exponent } => self.amplitude * (PI / exponent).powf(1.5),
        }
    }

    /// Smooth density at distance r from the component center
    /// (zero for point components, which carry no pointwise value).
    pub fn density_at(&self, r: f64) -> f64 {
        match self.shape {
            Shape::Point => 0.0,
            Shape::Sphere { radius } => {
                if r <= radius {
                    self.amplitude
                } else {
                    0.0
                }
            }
            Shape::Exponential { decay } => self.amplitude * (-decay * r).exp(),
            Shape::Gaussian { exponent } => self.amplitude * (-exponent * r * r).exp(),
        }
    }

    /// Centered form factor F(k) = ∫ e^{i k·s} ρ(s) d³s (real).
    pub fn form_factor(&self, k: f64) -> f64 {
        match self.shape {
            Shape::Point => self.amplitude,
            Shape::Sphere { radius } => {
                let x = k * radius;
                let shape = if x < 0.5 {
                    // (sin x - x cos x)/x³ = Σ_{n≥1} (-1)^{n+1} 2n x^{2n-2}/(2n+1)!
                    let x2 = x * x;
                    let mut term = 1.0 / 3.0;
                    let mut sum = term;
                    for nn in 2..12u32 {
                        term *= -x2 * (nn as f64)
                            / ((nn - 1) as f64 * (2 * nn) as f64 * (2 * nn + 1) as f64);
                        sum += term;
                        if term.abs() < 1e-18 {
                            break;
                        }
                    }
                    sum
                } else {
                    (x.sin() - x * x.cos()) / (x * x * x)
                };
                4.0 * PI * self.amplitude * radius.powi(3) * shape
            }
            Shape::Exponential { decay } => {
                8.0 * PI * self.amplitude * decay / (decay * decay + k * k).powi(2)
            }
            Shape::Gaussian { exponent } => {
                self.amplitude * (PI / exponent).powf(1.5) * (-k * k / (4.0 * exponent)).exp()
            }
        }
    }

    /// ∫_0^∞ s^{p+2} ρ(s) ds (radial moment entering all analytic MSRs).
    pub fn radial_moment(&self, p: u32) -> f64 {
        match self.shape {
            Shape::Point => unreachable!("point moments handled analytically"),
            Shape::Sphere { radius } => self.amplitude * radius.powi(p as i32 + 3) / (p + 3) as f64,
            Shape::Exponential { decay } => {
                self.amplitude * factorial(p + 2) / decay.powi(p as i32 + 3)
            }
            Shape::Gaussian { exponent } => {
                self.amplitude * gamma((p as f64 + 3.0) / 2.0)
                    / (2.0 * exponent.powf((p as f64 + 3.0) / 2.0))
            }
        }
    }

    /// Electrostatic potential of the centered component at distance r.
    pub fn potential(&self, r: f64) -> f64 {
        match self.shape {
            Shape::Point => self.amplitude / r,
            Shape::Sphere { radius } => {
                if r >= radius {
                    4.0 * PI * self.amplitude * radius.powi(3) / (3.0 * r)
                } else {
                    2.0 * PI * self.amplitude * (radius * radius - r * r / 3.0)
                }
            }
            Shape::Exponential { decay } => {
                let c = 4.0 * PI * self.amplitude / decay.powi(3);
                if r == 0.0 {
                    return c * decay;
                }
                // (2/r)(1 - e^{-λr}) - λ e^{-λr}; exp_m1 keeps the small-r
                // difference exact
                c * (-2.0 * (-decay * r).exp_m1() / r - decay * (-decay * r).exp())
            }
            Shape::Gaussian { exponent } => {
                let s = exponent.sqrt();
                if s * r < 1e-8 {
                    return 2.0 * PI * self.amplitude / exponent;
                }
                self.amplitude * (PI / exponent).powf(1.5) * libm::erf(s * r) / r
            }
        }
    }

    /// Ψ(x) = ∫_0^x s φ(s) ds, the inner antiderivative of the two-center
    /// reduction of the direct energy integral.
    pub fn potential_r_antiderivative(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Point => self.amplitude * x,
            Shape::Sphere { radius } => {
                let c = self.amplitude;
                if x <= radius {
                    2.0 * PI * c * (radius * radius * x * x / 2.0 - x.powi(4) / 12.0)
                } else {
                    let inner = 2.0 * PI * c * (5.0 * radius.powi(4) / 12.0);
                    inner + 4.0 * PI * c * radius.powi(3) / 3.0 * (x - radius)
                }
            }
            Shape::Exponential { decay } => {
                let c4 = 4.0 * PI * self.amplitude;
                let lx = decay * x;
                let bracket = if lx < 0.5 {
                    // 2u - 3 + e^{-u}(3 + u) = Σ_{j≥2} (-1)^j (3-j) u^j / j!
                    // (the direct form cancels to O(u²) against 3)
                    let mut sum = 0.0;
                    let mut ujfact = lx * lx / 2.0; // u^j / j! at j = 2
                    for j in 2..22u32 {
                        let t = (3.0 - j as f64) * ujfact;
                        sum += if j % 2 == 0 { t } else { -t };
                        ujfact *= lx / (j + 1) as f64;
                    }
                    sum
                } else {
                    2.0 * lx - 3.0 + (-lx).exp() * (3.0 + lx)
                };
                c4 / decay.powi(4) * bracket
            }
            Shape::Gaussian { exponent } => {
                let s = exponent.sqrt();
                self.amplitude * (PI / exponent).powf(1.5) / s
                    * (s * x * libm::erf(s * x) + (-exponent * x * x).exp_m1() / PI.sqrt())
            }
        }
    }

    /// Radius beyond which s^{extra} ρ(s) is negligible (< ~1e-18 of peak).
    pub fn support_radius(&self, extra_power: u32) -> f64 {
        let p = extra_power as f64;
        match self.shape {
            Shape::Point => 0.0,
            Shape::Sphere { radius } => radius,
            Shape::Exponential { decay } => (48.0 + 4.0 * p) / decay,
            Shape::Gaussian { exponent } => ((48.0 + 4.0 * p) / exponent).sqrt(),
        }
    }

    /// ∫ f(offset + s) ρ(s) d³s for a polynomial f, via exact radial and
    /// angular monomial moments.
    pub fn poly_moment(&self, f: &Poly3) -> Complex64 {
        if self.is_point() {
            return f.eval(self.offset) * self.amplitude;
        }
        let g = f.translated(self.offset);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(i, j, k), &c) in g.terms() {
            let ang = angular_monomial_integral(i, j, k);
            if ang == 0.0 {
                continue;
            }
            acc += c * (ang * self.radial_moment(i + j + k));
        }
        acc
    }
}

/// Table of spherical mean square radii r̄_{lm}^{2n}.
#[derive(Clone, Debug)]
pub struct SphericalMsr {
    l_max: u32,
    n_max: u32,
    entries: Vec<Complex64>,
}

impl SphericalMsr {
    fn index(l_max: u32, l: u32, m: i32, n: u32) -> usize {
        (n * (l_max + 1) * (l_max + 1) + l * l) as usize + (l as i32 + m) as usize
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn get(&self, l: u32, m: i32, n: u32) -> Complex64 {
        debug_assert!(l <= self.l_max && m.unsigned_abs() <= l && n <= self.n_max);
        self.entries[Self::index(self.l_max, l, m, n)]
    }
}

/// Totally symmetric rank-l tensor of order-n mean square radii in
/// compressed exponent-triple storage; multiplicity factors
/// l!/(p_x! p_y! p_z!) are applied at contraction time.
#[derive(Clone, Debug)]
pub struct CartesianMsr {
    rank: u32,
    order: u32,
    components: BTreeMap<(u32, u32, u32), f64>,
}

impl CartesianMsr {
    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn component(&self, p: (u32, u32, u32)) -> f64 {
        debug_assert_eq!(p.0 + p.1 + p.2, self.rank);
        self.components[&p]
    }

    pub fn components(&self) -> impl Iterator<Item = (&(u32, u32, u32), &f64)> {
        self.components.iter()
    }

    /// Contraction over one index pair (rank drops by two). The
    /// generating kernel is harmonic, so this is zero to rounding.
    pub fn trace(&self) -> Option<CartesianMsr> {
        if self.rank < 2 {
            return None;
        }
        let mut components = BTreeMap::new();
        for q in exponent_triples(self.rank - 2) {
            let v = self.component((q.0 + 2, q.1, q.2))
                + self.component((q.0, q.1 + 2, q.2))
                + self.component((q.0, q.1, q.2 + 2));
            components.insert(q, v);
        }
        Some(CartesianMsr {
            rank: self.rank - 2,
            order: self.order,
            components,
        })
    }

    /// Largest absolute component (scale for tolerance checks).
    pub fn max_abs(&self) -> f64 {
        self.components.values().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// Eq.-(15)-style conversion: the operator identity
/// Σ_m r̄_{lm}^{2n} Y_lm(-∇) =
/// (2l-1)!! sqrt((2l+1)/4π) ((-1)^l/l!) r̄^{2n}_{i₁..i_l} ∂_{i₁}..∂_{i_l}
/// read off in the monomial basis of the operator symbol.
pub fn convert_msr_spherical_to_cartesian(
    msr: &SphericalMsr,
    l: u32,
    n: u32,
) -> Result<CartesianMsr> {
    if l > msr.l_max() || n > msr.n_max() {
        return Err(Error::Input(format!(
            "MSR table covers l <= {}, n <= {}; requested (l={l}, n={n})",
            msr.l_max(),
            msr.n_max()
        )));
    }
    let mut symbol = Poly3::zero();
    for m in -(l as i32)..=l as i32 {
        let p = solid_harmonic_poly(AngularIndex::new(l, m)?)?;
        symbol.add_in_place(&p.scaled(msr.get(l, m, n)));
    }
    let kfac = double_factorial(2 * l as i64 - 1)? * ((2 * l + 1) as f64 / (4.0 * PI)).sqrt();
    let mut components = BTreeMap::new();
    for p in exponent_triples(l) {
        let weight = factorial(p.0) * factorial(p.1) * factorial(p.2);
        components.insert(p, (symbol.coefficient(p) * (weight / kfac)).re);
    }
    Ok(CartesianMsr {
        rank: l,
        order: n,
        components,
    })
}
