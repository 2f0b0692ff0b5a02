//! Gauss-Legendre panel quadrature for the weighted scalar product.
//!
//! λ < 0 integrals are taken in the compactified angle, x = R·sin θ, where
//! `dx/√(1+λω²x²) = R·dθ` exactly and the integrand is bounded; λ ≥ 0
//! integrals use dyadic panels in x with automatic tail extension (or a hard
//! truncation cap when a finite window is requested).

use crate::error::{Error, Result};
use crate::model::ModelParameters;

/// Relative stabilization target for panel-order doubling.
const QUAD_REL_TOL: f64 = 1e-12;
/// Absolute floor, relative to the integral of |f|, that counts as stable.
const QUAD_ABS_FLOOR: f64 = 1e-14;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// ∫ f over one panel with the given rule; also accumulates ∫|f|.
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, nodes: &[f64], wts: &[f64]) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let rad = 0.5 * (b - a);
    let mut sum = 0.0;
    let mut sum_abs = 0.0;
    for (z, w) in nodes.iter().zip(wts) {
        let v = f(mid + rad * z) * w;
        sum += v;
        sum_abs += v.abs();
    }
    (rad * sum, rad * sum_abs)
}

fn sum_panels<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], order: usize) -> (f64, f64) {
    let (nodes, wts) = gauss_legendre(order);
    let mut total = 0.0;
    let mut total_abs = 0.0;
    for pair in breaks.windows(2) {
        let (v, va) = panel(f, pair[0], pair[1], &nodes, &wts);
        total += v;
        total_abs += va;
    }
    (total, total_abs)
}

/// Integrate over a fixed panel layout, doubling the rule order until the
/// value stabilizes to `QUAD_REL_TOL` (or to an absolute floor set by ∫|f|,
/// which covers integrals that vanish by symmetry).
pub(crate) fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, breaks: &[f64]) -> Result<f64> {
    let mut order = 32;
    let (mut prev, _) = sum_panels(f, breaks, order);
    loop {
        order *= 2;
        let (cur, cur_abs) = sum_panels(f, breaks, order);
        let change = (cur - prev).abs();
        if change <= QUAD_REL_TOL * cur.abs() || change <= QUAD_ABS_FLOOR * cur_abs {
            return Ok(cur);
        }
        if order >= 512 {
            return Err(Error::QuadratureNonConvergence {
                last_change: change / cur.abs().max(f64::MIN_POSITIVE),
            });
        }
        prev = cur;
    }
}

/// Panel layout in the compactified angle for λ < 0: a coarse core plus
/// panels graded geometrically into both endpoints, where the integrand has
/// a power-law zero.
fn theta_breaks() -> Vec<f64> {
    let half = std::f64::consts::FRAC_PI_2;
    let mut upper = vec![0.0, 0.45, 0.9, 1.2];
    let mut delta = half - 1.2;
    while delta > 1e-10 {
        delta *= 0.2;
        upper.push(half - delta);
    }
    upper.push(half);
    let mut breaks: Vec<f64> = upper.iter().rev().map(|t| -t).collect();
    breaks.extend_from_slice(&upper[1..]);
    breaks
}

/// Dyadic panel edges 0, b, 2b, 4b, … covering (0, cap].
fn dyadic_breaks(base: f64, cap: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut edge = base.min(cap);
    loop {
        breaks.push(edge);
        if edge >= cap {
            break;
        }
        edge = (edge * 2.0).min(cap);
    }
    breaks
}

/// ∫_D f(x)·dx/√(1+λω²x²) with the λ-appropriate treatment of the domain.
///
/// * λ < 0 — exact compactification, full domain.
/// * λ ≥ 0 with `cap` — hard truncation to [-cap, cap].
/// * λ ≥ 0 without `cap` — dyadic tail extension until a whole block
///   contributes below 1e-13 of the running total.
pub(crate) fn integrate_weighted<F: Fn(f64) -> f64>(
    params: &ModelParameters,
    f: F,
    cap: Option<f64>,
) -> Result<f64> {
    let lambda = params.lambda();
    if lambda < 0.0 {
        let r = params.horizon_radius();
        let g = |theta: f64| f(r * theta.sin()) * r;
        return integrate_adaptive(&g, &theta_breaks());
    }
    // weight on the half line; fold the two sides together
    let omega = params.omega();
    let h = |x: f64| {
        let w = 1.0 / (1.0 + lambda * omega * omega * x * x).sqrt();
        (f(x) + f(-x)) * w
    };
    let base = (1.0 / (params.mass() * omega).sqrt()).min(1.0);
    if let Some(cap) = cap {
        if !(cap > 0.0) {
            return Err(Error::NonPositive {
                name: "cap",
                value: cap,
            });
        }
        return integrate_adaptive(&h, &dyadic_breaks(base, cap));
    }
    // tail extension: add dyadic blocks until they stop mattering
    let mut total = integrate_adaptive(&h, &dyadic_breaks(base, base))?;
    let mut lo = base;
    let mut blocks = 0;
    loop {
        let hi = lo * 2.0;
        let block = integrate_adaptive(&h, &[lo, hi])?;
        total += block;
        blocks += 1;
        if block.abs() <= 1e-13 * total.abs().max(f64::MIN_POSITIVE) {
            return Ok(total);
        }
        if blocks > 80 {
            return Err(Error::QuadratureNonConvergence {
                last_change: (block / total).abs(),
            });
        }
        lo = hi;
    }
}
