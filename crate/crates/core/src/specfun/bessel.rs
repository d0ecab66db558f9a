//! Spherical Bessel functions of the first kind.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Power series j_l(x) = Σ_n (-1)^n x^{l+2n} / (n! 2^n (2l+2n+1)!!),
/// evaluated with a running term. Accurate when x is not much larger
/// than l (no cancellation between terms).
fn series(l: u32, x: f64) -> f64 {
    // leading term x^l / (2l+1)!!
    let mut term = 1.0;
    for k in 1..=l {
        term *= x / (2 * k + 1) as f64;
    }
    let mut sum = term;
    let x2 = x * x;
    for n in 1..200u32 {
        term *= -x2 / ((2 * n) as f64 * (2 * l + 2 * n + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum
}

/// Upward recurrence from j_0, j_1; stable for x >= l.
fn upward(l: u32, x: f64) -> f64 {
    let j0 = x.sin() / x;
    if l == 0 {
        return j0;
    }
    let j1 = j0 / x - x.cos() / x;
    if l == 1 {
        return j1;
    }
    let (mut prev, mut cur) = (j0, j1);
    for n in 1..l {
        let next = (2 * n + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Miller's downward recurrence normalized against j_0 or j_1,
/// for the regime l/2 <= x < l where neither the series nor the
/// upward recurrence is reliable.
fn downward(l: u32, x: f64) -> f64 {
    let start = l + 24 + (1.5 * x.sqrt()) as u32;
    let mut u_next = 0.0f64;
    let mut u = 1e-280f64;
    let mut target = 0.0;
    let mut u0 = 0.0;
    let mut u1 = 0.0;
    for n in (0..=start).rev() {
        let u_prev = (2 * n + 3) as f64 / x * u - u_next;
        u_next = u;
        u = u_prev;
        // u now holds the unnormalized j_n
        if n == l {
            target = u;
        }
        if n == 1 {
            u1 = u;
        }
        if n == 0 {
            u0 = u;
        }
        if u.abs() > 1e260 {
            let s = 1e-260;
            u *= s;
            u_next *= s;
            target *= s;
            u1 *= s;
        }
    }
    let j0 = x.sin() / x;
    let j1 = j0 / x - x.cos() / x;
    // normalize against whichever reference is better conditioned
    if j0.abs() >= j1.abs() {
        target * (j0 / u0)
    } else {
        target * (j1 / u1)
    }
}

/// Standard spherical Bessel function of the first kind j_l(x).
pub fn spherical_bessel_std(l: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = spherical_bessel_std(l, -x);
        return if l.is_multiple_of(2) { v } else { -v };
    }
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.5 + 0.5 * l as f64 {
        series(l, x)
    } else if x >= l as f64 {
        upward(l, x)
    } else {
        downward(l, x)
    }
}

/// Spherical Bessel function in the 4π i^l convention used by the
/// Rayleigh expansion of the plane wave.
pub fn spherical_bessel_rayleigh(l: u32, x: f64) -> Complex64 {
    let i_pow = match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    i_pow * (4.0 * PI * spherical_bessel_std(l, x))
}
