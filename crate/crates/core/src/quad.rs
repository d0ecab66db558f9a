//! Quadrature kernels: Gauss–Legendre rules, globally adaptive
//! Gauss–Kronrod integration, and panel summation with Wynn-epsilon
//! acceleration for oscillatory Fourier–Bessel tails.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BinaryHeap;

/// 15-point Kronrod abscissae (positive half, QUADPACK G7K15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// 7-point Gauss weights (embedded rule).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value type an integrand may produce (real or complex).
pub trait QuadValue:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// One G7K15 application on [a, b]: returns (kronrod, |kronrod - gauss|).
fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let fsum = f(center - dx) + f(center + dx);
        kronrod = kronrod + fsum * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + fsum * WG[j / 2];
        }
    }
    kronrod = kronrod * half;
    gauss = gauss * half;
    (kronrod, (kronrod - gauss).magnitude())
}

struct Segment<T> {
    err: f64,
    a: f64,
    b: f64,
    value: T,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over [a, b].
/// Returns (value, error estimate).
pub fn adaptive<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(T, f64)> {
    adaptive_segmented(&mut f, &[a, b], abs_tol, rel_tol)
}

/// Adaptive integration over consecutive segments given by `edges`
/// (sorted breakpoints; integrand may have kinks there).
pub fn adaptive_segmented<T: QuadValue>(
    f: &mut impl FnMut(f64) -> T,
    edges: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(T, f64)> {
    const MAX_SEGMENTS: usize = 4000;
    let mut heap: BinaryHeap<Segment<T>> = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk15(f, w[0], w[1]);
        total = total + v;
        total_err += e;
        heap.push(Segment {
            err: e,
            a: w[0],
            b: w[1],
            value: v,
        });
    }
    let mut count = heap.len();
    loop {
        let target = abs_tol.max(rel_tol * total.magnitude());
        if total_err <= target || heap.is_empty() {
            return Ok((total, total_err));
        }
        if count >= MAX_SEGMENTS {
            return Err(Error::Numeric(format!(
                "adaptive quadrature did not reach tolerance {target:.3e} (residual {total_err:.3e})"
            )));
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; accept as is
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total = total + (v1 + v2 - worst.value);
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            err: e1,
            a: worst.a,
            b: mid,
            value: v1,
        });
        heap.push(Segment {
            err: e2,
            a: mid,
            b: worst.b,
            value: v2,
        });
        count += 1;
    }
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
/// Returns (accelerated limit, spread of the last even column entries).
fn wynn_epsilon(s: &[f64]) -> (f64, f64) {
    let n = s.len();
    let mut prev_prev: Vec<f64> = vec![0.0; n + 1]; // eps_{-1}
    let mut prev: Vec<f64> = s.to_vec(); // eps_0
    let mut best = *s.last().unwrap();
    let mut prev_best = best;
    for _k in 1..n {
        let m = prev.len() - 1;
        let mut cur = Vec::with_capacity(m);
        for i in 0..m {
            let d = prev[i + 1] - prev[i];
            if d.abs() < 1e-300 {
                // column converged exactly
                return (prev[i + 1], 0.0);
            }
            cur.push(prev_prev[i + 1] + 1.0 / d);
        }
        if _k % 2 == 0 && !cur.is_empty() {
            prev_best = best;
            best = *cur.last().unwrap();
        }
        prev_prev = prev;
        prev = cur;
        if prev.len() < 2 {
            break;
        }
    }
    (best, (best - prev_best).abs())
}

/// Integral of `f` over [0, ∞) when the integrand oscillates with
/// half-period `h`: panels [j h, (j+1) h] are summed with Wynn-epsilon
/// acceleration of the partial sums. Returns (value, error estimate).
pub fn oscillatory_semi_infinite(
    mut f: impl FnMut(f64) -> f64,
    h: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    const MAX_PANELS: usize = 5000;
    const WINDOW: usize = 36;
    let panel_tol = (abs_tol * 1e-2).max(1e-300);
    let mut partial_sums: Vec<f64> = Vec::new();
    let mut acc = 0.0;
    let mut quad_err = 0.0;
    let mut tiny_run = 0usize;
    for j in 0..MAX_PANELS {
        let (p, e) = adaptive(&mut f, j as f64 * h, (j + 1) as f64 * h, panel_tol, 1e-13)?;
        acc += p;
        quad_err += e;
        partial_sums.push(acc);
        let scale = acc.abs().max(abs_tol);
        if p.abs() < 1e-16 * scale {
            tiny_run += 1;
            if tiny_run >= 3 && j >= 4 {
                return Ok((acc, quad_err + p.abs()));
            }
        } else {
            tiny_run = 0;
        }
        if j >= 8 && j % 4 == 0 {
            let lo = partial_sums.len().saturating_sub(WINDOW);
            let (limit, spread) = wynn_epsilon(&partial_sums[lo..]);
            let target = abs_tol.max(rel_tol * limit.abs());
            if spread < target && p.abs() < 1e3 * target {
                return Ok((limit, spread + quad_err));
            }
        }
    }
    let lo = partial_sums.len().saturating_sub(WINDOW);
    let (limit, spread) = wynn_epsilon(&partial_sums[lo..]);
    let target = abs_tol.max(rel_tol * limit.abs());
    if spread < target {
        return Ok((limit, spread + quad_err));
    }
    Err(Error::Numeric(format!(
        "oscillatory tail did not converge (panel width {h:.3e}, spread {spread:.3e})"
    )))
}

/// Integral of a monotonically decaying `f` over [0, ∞): panels of
/// doubling width starting at `scale`, stopped once negligible.
pub fn decaying_semi_infinite(
    mut f: impl FnMut(f64) -> f64,
    scale: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    const MAX_PANELS: usize = 80;
    let mut a = 0.0;
    let mut width = scale;
    let mut acc = 0.0;
    let mut err = 0.0;
    let mut tiny_run = 0usize;
    for _ in 0..MAX_PANELS {
        let (p, e) = adaptive(&mut f, a, a + width, abs_tol * 1e-2, 1e-13)?;
        acc += p;
        err += e;
        a += width;
        width *= 2.0;
        if p.abs() < abs_tol.max(rel_tol * acc.abs()) * 1e-2 {
            tiny_run += 1;
            if tiny_run >= 2 {
                return Ok((acc, err + p.abs()));
            }
        } else {
            tiny_run = 0;
        }
    }
    Err(Error::Numeric("decaying tail did not converge".into()))
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
