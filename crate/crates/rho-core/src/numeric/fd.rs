//! Finite-difference discretization of the stationary mode equation in its
//! Sturm-Liouville form
//!
//! ```text
//! (p U')' + (E² - V)·w·U = 0,   p = √(1+λω²x²),  w = 1/p,  V = m²·g00,
//! ```
//!
//! which is the weight-1/√(1+λω²x²) rewrite of the Klein-Gordon reduction.
//! For λ ≥ 0 the domain is truncated to [-L, L] with Dirichlet ends and the
//! generalized problem A·U = E²·W·U is folded symmetrically by W^{1/2};
//! the eigenvalue path additionally splits by parity on a staggered half
//! grid, which halves the matrices and separates even from odd levels.
//! For λ < 0 the compactification x = R·sin θ turns the problem into the
//! plain Schrödinger form U''(θ) + R²(E² - V)U = 0 on (-π/2, π/2), so the
//! discretization is a standard second difference with unit weight and the
//! endpoint singularity of V acts as the confining wall.

use crate::error::{Error, Result};
use crate::model::ModelParameters;
use crate::numeric::tridiagonal::SymTridiag;

/// One assembled grid problem. Matrix eigenvalues approximate E²; matrix
/// eigenvectors v are orthonormal in plain ℓ₂, and `U_j = unfold_j · v_j`
/// recovers mode values with ⟨U,U'⟩_w ≈ step·Σ v_j v'_j.
pub(crate) struct Discretization {
    pub tri: SymTridiag,
    pub xs: Vec<f64>,
    pub unfold: Vec<f64>,
    /// discrete measure: ⟨U,V⟩ over the weight equals step·(v·v')
    pub step: f64,
}

pub(crate) fn assemble(
    params: &ModelParameters,
    n_interior: usize,
    half_width: Option<f64>,
) -> Result<Discretization> {
    if n_interior < 64 {
        return Err(Error::GridTooCoarse {
            what: "need at least 64 interior grid points",
        });
    }
    let lambda = params.lambda();
    let omega = params.omega();
    let m2 = params.mass() * params.mass();
    let n = n_interior;

    if lambda < 0.0 {
        let r = params.horizon_radius();
        let h = std::f64::consts::PI / (n as f64 + 1.0);
        let inv = 1.0 / (r * r * h * h);
        let mut d = Vec::with_capacity(n);
        let mut xs = Vec::with_capacity(n);
        for j in 1..=n {
            let theta = -std::f64::consts::FRAC_PI_2 + j as f64 * h;
            let (sin_t, cos_t) = theta.sin_cos();
            let x = r * sin_t;
            // 1+λω²x² = cos²θ exactly under the compactification
            let b = cos_t * cos_t;
            let a = b + omega * omega * x * x;
            d.push(2.0 * inv + m2 * a / b);
            xs.push(x);
        }
        let e = vec![-inv; n - 1];
        return Ok(Discretization {
            tri: SymTridiag::new(d, e),
            xs,
            unfold: vec![1.0; n],
            step: r * h,
        });
    }

    let l = require_width(half_width)?;
    let h = 2.0 * l / (n as f64 + 1.0);
    let mut xs = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    let mut a_diag = Vec::with_capacity(n);
    for j in 1..=n {
        let x = -l + j as f64 * h;
        let b = b_of(params, x);
        let wj = 1.0 / b.sqrt();
        let v = m2 * (b + omega * omega * x * x) / b;
        let p_left = p_of(params, x - 0.5 * h);
        let p_right = p_of(params, x + 0.5 * h);
        a_diag.push((p_left + p_right) / (h * h) + v * wj);
        xs.push(x);
        w.push(wj);
    }
    let mut tri_d = Vec::with_capacity(n);
    let mut tri_e = Vec::with_capacity(n - 1);
    let mut unfold = Vec::with_capacity(n);
    for j in 0..n {
        tri_d.push(a_diag[j] / w[j]);
        unfold.push(1.0 / w[j].sqrt());
        if j + 1 < n {
            let p_mid = p_of(params, xs[j] + 0.5 * h);
            tri_e.push(-p_mid / (h * h) / (w[j] * w[j + 1]).sqrt());
        }
    }
    Ok(Discretization {
        tri: SymTridiag::new(tri_d, tri_e),
        xs,
        unfold,
        step: h,
    })
}

fn require_width(half_width: Option<f64>) -> Result<f64> {
    half_width.ok_or(Error::ArgumentOutOfRange {
        what: "λ ≥ 0 discretization needs a truncation half-width",
    })
}

fn b_of(params: &ModelParameters, x: f64) -> f64 {
    1.0 + params.lambda() * params.omega() * params.omega() * x * x
}

fn p_of(params: &ModelParameters, x: f64) -> f64 {
    b_of(params, x).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parity {
    Even,
    Odd,
}

/// Staggered half-grid x_j = (j+1/2)h on (0, L), Dirichlet at L, with the
/// mirror condition U(-x) = ±U(x) folded into the first row. Both matrices
/// stay symmetric after the W^{1/2} fold.
fn assemble_half(params: &ModelParameters, n_half: usize, l: f64, parity: Parity) -> SymTridiag {
    let omega = params.omega();
    let m2 = params.mass() * params.mass();
    let h = l / n_half as f64;
    let mut w = Vec::with_capacity(n_half);
    let mut a_diag = Vec::with_capacity(n_half);
    for j in 0..n_half {
        let x = (j as f64 + 0.5) * h;
        let b = b_of(params, x);
        let wj = 1.0 / b.sqrt();
        let v = m2 * (b + omega * omega * x * x) / b;
        let p_left = p_of(params, j as f64 * h);
        let p_right = p_of(params, (j as f64 + 1.0) * h);
        let mut diag = (p_left + p_right) / (h * h) + v * wj;
        if j == 0 {
            match parity {
                // mirror point carries U_{-1} = U_0: the x = 0 flux vanishes
                Parity::Even => diag -= p_left / (h * h),
                // U_{-1} = -U_0 doubles the x = 0 flux
                Parity::Odd => diag += p_left / (h * h),
            }
        }
        if j == n_half - 1 {
            // antisymmetric ghost beyond the Dirichlet wall at L
            diag += p_right / (h * h);
        }
        a_diag.push(diag);
        w.push(wj);
    }
    let mut tri_d = Vec::with_capacity(n_half);
    let mut tri_e = Vec::with_capacity(n_half - 1);
    for j in 0..n_half {
        tri_d.push(a_diag[j] / w[j]);
        if j + 1 < n_half {
            let p_mid = p_of(params, (j as f64 + 1.0) * h);
            tri_e.push(-p_mid / (h * h) / (w[j] * w[j + 1]).sqrt());
        }
    }
    SymTridiag::new(tri_d, tri_e)
}

/// Lowest k eigenvalues at one grid resolution, with optional verified
/// bracket seeds indexed like the merged spectrum.
fn eigen_at(
    params: &ModelParameters,
    n_interior: usize,
    half_width: Option<f64>,
    k: usize,
    seeds: Option<&[(f64, f64)]>,
) -> Result<Vec<f64>> {
    if params.lambda() < 0.0 {
        let disc = assemble(params, n_interior, None)?;
        return Ok(disc.tri.lowest_eigenvalues_multi(k, seeds));
    }
    let l = require_width(half_width)?;
    let n_half = (n_interior / 2).max(64);
    let k_even = k.div_ceil(2);
    let k_odd = k / 2;
    // even and odd levels interleave, so merged index 2j is even-sector j
    let pick = |seeds: Option<&[(f64, f64)]>, offset: usize| -> Option<Vec<(f64, f64)>> {
        seeds.map(|s| s.iter().skip(offset).step_by(2).copied().collect())
    };
    let even_seeds = pick(seeds, 0);
    let odd_seeds = pick(seeds, 1);
    let (even, odd) = std::thread::scope(|scope| {
        let odd_handle = scope.spawn(|| {
            if k_odd > 0 {
                assemble_half(params, n_half, l, Parity::Odd)
                    .lowest_eigenvalues_multi(k_odd, odd_seeds.as_deref())
            } else {
                Vec::new()
            }
        });
        let even = assemble_half(params, n_half, l, Parity::Even)
            .lowest_eigenvalues_multi(k_even, even_seeds.as_deref());
        (even, odd_handle.join().expect("parity solver panicked"))
    });
    let mut merged = Vec::with_capacity(k);
    for i in 0..k {
        merged.push(if i % 2 == 0 { even[i / 2] } else { odd[i / 2] });
    }
    // oscillation theory interleaves the sectors; guard against surprises
    for pair in merged.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::GridTooCoarse {
                what: "parity sectors failed to interleave",
            });
        }
    }
    Ok(merged)
}

/// Lowest k matrix eigenvalues (approximating E²) on the plain full grid.
pub(crate) fn solve_raw(disc: &Discretization, k: usize) -> Vec<f64> {
    disc.tri.lowest_eigenvalues_multi(k, None)
}

/// Richardson ladder: eigenvalues at h, h/2, h/4 and the two-stage
/// extrapolation of the h² scheme. A coarse pre-solve seeds the bisection
/// brackets of the production grids.
pub(crate) struct RichardsonLadder {
    pub extrapolated: Vec<f64>,
    pub error_estimate: Vec<f64>,
}

pub(crate) fn richardson_solve(
    params: &ModelParameters,
    k: usize,
    base_points: usize,
    half_width: Option<f64>,
) -> Result<RichardsonLadder> {
    let negative = params.lambda() < 0.0;
    let sizes: [usize; 3] = if negative {
        [base_points, 2 * base_points + 1, 4 * base_points + 3]
    } else {
        [base_points, 2 * base_points, 4 * base_points]
    };
    // cheap coarse solve for bracket seeding only
    let pre_n = (base_points / 8).clamp(1024, base_points);
    let pre = eigen_at(params, pre_n, half_width, k, None)?;
    let mut seeds: Vec<(f64, f64)> = pre
        .iter()
        .map(|&ev| {
            let margin = (0.7 * ev.abs()).max(1.0);
            (ev - margin, ev + margin)
        })
        .collect();

    let mut raw: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut prev: Option<Vec<f64>> = None;
    for (level, &n) in sizes.iter().enumerate() {
        let evs = eigen_at(params, n, half_width, k, Some(&seeds))?;
        seeds = match &prev {
            None => evs
                .iter()
                .map(|&ev| {
                    let margin = (0.2 * ev.abs()).max(0.5);
                    (ev - margin, ev + margin)
                })
                .collect(),
            Some(prev) => evs
                .iter()
                .zip(prev)
                .map(|(&fine, &coarse)| {
                    let margin = (4.0 * (fine - coarse).abs()).max(1e-7 * fine.abs());
                    (fine - margin, fine + margin)
                })
                .collect(),
        };
        prev = Some(evs.clone());
        raw[level] = evs;
    }
    let mut extrapolated = Vec::with_capacity(k);
    let mut error_estimate = Vec::with_capacity(k);
    for i in 0..k {
        let r1a = (4.0 * raw[1][i] - raw[0][i]) / 3.0;
        let r1b = (4.0 * raw[2][i] - raw[1][i]) / 3.0;
        let r2 = (16.0 * r1b - r1a) / 15.0;
        extrapolated.push(r2);
        error_estimate.push((r1b - r1a).abs() / 15.0);
    }
    Ok(RichardsonLadder {
        extrapolated,
        error_estimate,
    })
}
