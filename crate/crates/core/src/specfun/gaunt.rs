//! Gaunt coefficients for the stretched coupling (l, l') -> l + l',
//! via closed-form Wigner-3j products with exact integer prefactors.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use std::f64::consts::PI;

fn big_factorial(n: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

/// Exact rational num/den promoted to f64 at the last step, valid even
/// when numerator and denominator individually exceed the f64 range.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // scale so the integer quotient carries ~80 significant bits
    let shift = (80 - (nb - db)).max(0) as u64;
    let q = (num << shift) / den;
    let mut digits = q.to_u64_digits();
    digits.reverse();
    let mut value = 0.0f64;
    for d in digits {
        value = value * 1.8446744073709552e19 + d as f64;
    }
    value * 2f64.powi(-(shift as i32))
}

/// Stretched Wigner 3j symbol (l l' l+l'; m m' -(m+m')) in closed form.
pub fn wigner_3j_stretched(l: u32, m: i32, lp: u32, mp: i32) -> f64 {
    let big_l = l + lp;
    let big_m = m + mp;
    debug_assert!(m.unsigned_abs() <= l && mp.unsigned_abs() <= lp);
    let num = big_factorial(2 * l)
        * big_factorial(2 * lp)
        * big_factorial((big_l as i32 + big_m) as u32)
        * big_factorial((big_l as i32 - big_m) as u32);
    let den = big_factorial(2 * big_l + 1)
        * big_factorial((l as i32 + m) as u32)
        * big_factorial((l as i32 - m) as u32)
        * big_factorial((lp as i32 + mp) as u32)
        * big_factorial((lp as i32 - mp) as u32);
    let sign = if (l as i64 - lp as i64 + (m + mp) as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    sign * ratio_to_f64(&num, &den).sqrt()
}

/// Gaunt coefficient <l+l', m+m' | l m | l' m'> =
/// ∫ conj(Y_{l+l', m+m'}) Y_{lm} Y_{l'm'} dΩ (real-valued).
pub fn gaunt(l: u32, m: i32, lp: u32, mp: i32) -> Result<f64> {
    if m.unsigned_abs() > l || mp.unsigned_abs() > lp {
        return Err(Error::Domain(format!(
            "gaunt index violation: (l={l}, m={m}, l'={lp}, m'={mp})"
        )));
    }
    let big_l = l + lp;
    let big_m = m + mp;
    let norm =
        ((2 * l + 1) as f64 * (2 * lp + 1) as f64 * (2 * big_l + 1) as f64 / (4.0 * PI)).sqrt();
    let tj0 = wigner_3j_stretched(l, 0, lp, 0);
    let tjm = wigner_3j_stretched(l, m, lp, mp);
    let sign = if big_m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * norm * tj0 * tjm)
}

/// Cache of Gaunt coefficients for all l, l' <= l_max.
pub struct GauntTable {
    l_max: u32,
    values: Vec<f64>,
}

impl GauntTable {
    pub fn new(l_max: u32) -> Self {
        let dim = ((l_max + 1) * (l_max + 1)) as usize;
        let mut values = vec![0.0; dim * dim];
        for l in 0..=l_max {
            for m in -(l as i32)..=l as i32 {
                let i = (l * l) as usize + (l as i32 + m) as usize;
                for lp in 0..=l_max {
                    for mp in -(lp as i32)..=lp as i32 {
                        let j = (lp * lp) as usize + (lp as i32 + mp) as usize;
                        values[i * dim + j] = gaunt(l, m, lp, mp).expect("valid indices");
                    }
                }
            }
        }
        GauntTable { l_max, values }
    }

    pub fn get(&self, l: u32, m: i32, lp: u32, mp: i32) -> f64 {
        debug_assert!(l <= self.l_max && lp <= self.l_max);
        let dim = ((self.l_max + 1) * (self.l_max + 1)) as usize;
        let i = (l * l) as usize + (l as i32 + m) as usize;
        let j = (lp * lp) as usize + (lp as i32 + mp) as usize;
        self.values[i * dim + j]
    }
}
