//! Special-function kernels: factorials, spherical and solid harmonics,
//! Gaunt coefficients, spherical Bessel functions, incomplete gamma.

mod bessel;
mod gamma;
mod gaunt;
mod harmonics;

pub use bessel::{spherical_bessel_rayleigh, spherical_bessel_std};
pub use gamma::{gamma, lower_incomplete_gamma};
pub use gaunt::{gaunt, wigner_3j_stretched, GauntTable};
pub use harmonics::{
    irregular_solid_harmonic, regular_solid_harmonic, sph_harm, SphericalHarmonicTable,
};

use crate::error::{Error, Result};

/// Multipole index pair (l, m) with |m| <= l.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngularIndex {
    pub l: u32,
    pub m: i32,
}

impl AngularIndex {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::Domain(format!(
                "|m| = {} exceeds l = {}",
                m.abs(),
                l
            )));
        }
        Ok(AngularIndex { l, m })
    }
}

/// n! as f64; exact for n <= 20, correctly rounded beyond.
pub fn factorial(n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 2..=n as u64 {
        acc *= k as f64;
    }
    acc
}

/// k!! as an exact integer, with (-1)!! = 0!! = 1.
///
/// Errors for k < -1 and when the product overflows i128
/// (k around 55; far beyond the l <= 30 range used here).
pub fn double_factorial_exact(k: i64) -> Result<i128> {
    if k < -1 {
        return Err(Error::Domain(format!("double factorial of {k}")));
    }
    let mut acc: i128 = 1;
    let mut j = k as i128;
    while j > 1 {
        acc = acc
            .checked_mul(j)
            .ok_or_else(|| Error::Domain(format!("{k}!! overflows the exact integer range")))?;
        j -= 2;
    }
    Ok(acc)
}

/// k!! as f64. Exact (integer-valued product, one final rounding) for the
/// whole supported range; errors only for k < -1.
pub fn double_factorial(k: i64) -> Result<f64> {
    if k < -1 {
        return Err(Error::Domain(format!("double factorial of {k}")));
    }
    if let Ok(v) = double_factorial_exact(k) {
        return Ok(v as f64);
    }
    let mut acc = 1.0f64;
    let mut j = k;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    Ok(acc)
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1) = Γ(a+n)/Γ(a),
/// computed as the product so gamma poles never enter.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for j in 0..n {
        acc *= a + j as f64;
    }
    acc
}

/// Binomial coefficient as f64.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}
