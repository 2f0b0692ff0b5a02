//! Independent numerical machinery: weighted scalar products, normalization,
//! Gram matrices, a finite-difference Sturm-Liouville eigensolver with
//! Richardson extrapolation, node counting and norm-divergence diagnostics.
//!
//! Everything here deliberately avoids the closed-form spectrum: eigenvalues
//! come from a symmetric discretization of the mode equation and integrals
//! from adaptive Gauss-Legendre panels, so the analytic results can be tested
//! against genuinely independent numbers. (The closed forms are consulted
//! only for grid sizing heuristics.)

mod fd;
mod quadrature;
mod tridiagonal;

use crate::classical;
use crate::error::{Error, Result};
use crate::model::ModelParameters;
use crate::quantum::{self, QuantumLevel};

/// Discretization request for the eigensolver and sampling helpers.
///
/// `points` counts interior grid points (Dirichlet boundaries). For λ ≥ 0 the
/// finite window [-L, L] is either given by `domain_cap` or derived from the
/// analytic decay of the states; λ < 0 grids live on the compactified angle
/// and never touch the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub domain_cap: Option<f64>,
}

impl GridSpec {
    pub fn new(points: usize, domain_cap: Option<f64>) -> Self {
        Self { points, domain_cap }
    }

    /// A grid adequate for the first `levels` bound states of the model.
    pub fn recommended(params: &ModelParameters, levels: u32) -> Self {
        let lambda = params.lambda();
        if lambda < 0.0 {
            return Self::new(1024, None);
        }
        let top = levels.saturating_sub(1);
        let cap = auto_half_width(params, top);
        // h ≈ (1/8)·the oscillator length at the base grid: two doublings of
        // the Richardson ladder still land far inside the h² regime
        let scale = (params.mass() * params.omega()).sqrt();
        let points = (16.0 * cap * scale) as usize;
        Self::new(points.clamp(1024, 1 << 21), Some(cap))
    }

    fn validate(&self) -> Result<()> {
        if self.points < 64 {
            return Err(Error::GridTooCoarse {
                what: "GridSpec.points must be at least 64",
            });
        }
        Ok(())
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::new(2048, None)
    }
}

/// Truncation half-width for λ ≥ 0 from the analytic decay of the states:
/// Gaussian tails for λ = 0, the power-law envelope |U|²w ~ x^{2(2p₋+n)-1}
/// for λ > 0 pushed below 1e-12, clamped to keep the uniform grid workable.
fn auto_half_width(params: &ModelParameters, top_level: u32) -> f64 {
    let omega = params.omega();
    let mass = params.mass();
    let lambda = params.lambda();
    if lambda == 0.0 {
        let ground = 8.0 / (mass * omega).sqrt();
        let top_energy = quantum::energy_level(params, top_level)
            .map(|l| l.energy)
            .unwrap_or(mass);
        let swing = classical::amplitude(params, top_energy).unwrap_or(0.0);
        return ground.max(8.0 * swing);
    }
    let scale = 1.0 / (omega * lambda.sqrt());
    let n_top = quantum::max_level(params)
        .map(|n_max| top_level.min(n_max))
        .unwrap_or(top_level);
    let p_minus = match quantum::exponent_branch(params) {
        Ok(p) => p,
        Err(_) => return 64.0 * scale,
    };
    let kappa = 2.0 * (2.0 * p_minus + n_top as f64) - 1.0; // negative
    let tail = (1e-12_f64).powf(1.0 / kappa);
    (tail * scale).clamp(64.0 * scale, 65_536.0 * scale)
}

/// Eigenvalues of the discretized mode equation after Richardson
/// extrapolation over two grid doublings.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericalSpectrum {
    /// E_n = +√(E²_n), ascending.
    pub energies: Vec<f64>,
    /// The extrapolated eigenvalues E²_n.
    pub energies_squared: Vec<f64>,
    /// Per-level Richardson error estimate, in units of E.
    pub estimated_error: Vec<f64>,
    pub grid: GridSpec,
}

/// The relativistic scalar product ⟨u, v⟩ = ∫_D u·v·dx/√(1+λω²x²),
/// compactified (λ < 0), truncated at `grid.domain_cap` or tail-extended
/// automatically (λ ≥ 0).
pub fn scalar_product<U, V>(params: &ModelParameters, u: U, v: V, grid: &GridSpec) -> Result<f64>
where
    U: Fn(f64) -> f64,
    V: Fn(f64) -> f64,
{
    grid.validate()?;
    quadrature::integrate_weighted(params, |x| u(x) * v(x), grid.domain_cap)
}

/// A bound level together with its normalization factor: `value(x)` is
/// N·U_raw(x) with ⟨value, value⟩ = 1.
#[derive(Debug, Clone)]
pub struct NormalizedWavefunction {
    params: ModelParameters,
    pub level: QuantumLevel,
    pub norm_constant: f64,
}

impl NormalizedWavefunction {
    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.norm_constant * quantum::wavefunction_value(&self.params, &self.level, x)?)
    }
}

/// Normalize a bound level against the weighted scalar product.
pub fn normalize(
    params: &ModelParameters,
    level: &QuantumLevel,
    grid: &GridSpec,
) -> Result<NormalizedWavefunction> {
    grid.validate()?;
    let raw = |x: f64| quantum::wavefunction_value(params, level, x).unwrap_or(0.0);
    let norm2 = quadrature::integrate_weighted(params, |x| raw(x) * raw(x), grid.domain_cap)?;
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::QuadratureNonConvergence { last_change: norm2 });
    }
    Ok(NormalizedWavefunction {
        params: *params,
        level: *level,
        norm_constant: 1.0 / norm2.sqrt(),
    })
}

/// Gram matrix G_ij = ⟨U_i, U_j⟩ of normalized bound states; the expected
/// value is the identity.
pub fn gram_matrix(
    params: &ModelParameters,
    states: &[NormalizedWavefunction],
    grid: &GridSpec,
) -> Result<Vec<Vec<f64>>> {
    grid.validate()?;
    let k = states.len();
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let val = scalar_product(
                params,
                |x| states[i].value(x).unwrap_or(0.0),
                |x| states[j].value(x).unwrap_or(0.0),
                grid,
            )?;
            gram[i][j] = val;
            gram[j][i] = val;
        }
    }
    Ok(gram)
}

fn resolve_half_width(params: &ModelParameters, grid: &GridSpec, k: usize) -> Option<f64> {
    if params.lambda() < 0.0 {
        None
    } else {
        Some(
            grid.domain_cap
                .unwrap_or_else(|| auto_half_width(params, k.saturating_sub(1) as u32)),
        )
    }
}

/// First k eigenvalues of the discretized self-adjoint form
/// `(√(1+λω²x²) U')' + (E² - V)U/√(1+λω²x²) = 0`, V = m²(1+(1+λ)ω²x²)/(1+λω²x²),
/// Richardson-extrapolated over two grid doublings from `grid.points`.
pub fn sturm_liouville_eigen(
    params: &ModelParameters,
    k: usize,
    grid: &GridSpec,
) -> Result<NumericalSpectrum> {
    grid.validate()?;
    if k < 1 {
        return Err(Error::ArgumentOutOfRange { what: "k must be ≥ 1" });
    }
    if let Some(n_max) = quantum::max_level(params) {
        if k > n_max as usize + 1 {
            return Err(Error::ArgumentOutOfRange {
                what: "λ > 0 admits only n_max + 1 bound levels",
            });
        }
    }
    let half_width = resolve_half_width(params, grid, k);
    let ladder = fd::richardson_solve(params, k, grid.points, half_width)?;
    let mut energies = Vec::with_capacity(k);
    let mut errors = Vec::with_capacity(k);
    for i in 0..k {
        let e2 = ladder.extrapolated[i];
        if !(e2 > 0.0) {
            return Err(Error::GridTooCoarse {
                what: "negative extrapolated eigenvalue",
            });
        }
        let e = e2.sqrt();
        let err = ladder.error_estimate[i] / (2.0 * e);
        if err > 1e-3 * e {
            return Err(Error::GridTooCoarse {
                what: "Richardson error estimate above 1e-3",
            });
        }
        energies.push(e);
        errors.push(err);
    }
    Ok(NumericalSpectrum {
        energies,
        energies_squared: ladder.extrapolated,
        estimated_error: errors,
        grid: *grid,
    })
}

/// Raw (single-grid, no extrapolation) eigenvalues E² at exactly
/// `grid.points` interior points — the knob for convergence-order studies.
pub fn sturm_liouville_eigen_raw(
    params: &ModelParameters,
    k: usize,
    grid: &GridSpec,
) -> Result<Vec<f64>> {
    grid.validate()?;
    let half_width = resolve_half_width(params, grid, k);
    let disc = fd::assemble(params, grid.points, half_width)?;
    Ok(fd::solve_raw(&disc, k))
}

/// Count of discretized eigenvalues with E² strictly below `energy²` — a
/// Sturm count, exact for the assembled matrix.
pub fn count_levels_below(
    params: &ModelParameters,
    energy: f64,
    grid: &GridSpec,
) -> Result<usize> {
    grid.validate()?;
    let half_width = resolve_half_width(params, grid, 8);
    let disc = fd::assemble(params, grid.points, half_width)?;
    Ok(disc.tri.count_below(energy * energy))
}

/// One numerically computed mode on its grid.
#[derive(Debug, Clone)]
pub struct SturmMode {
    pub energy: f64,
    /// Mode values at `xs`, normalized so that step·Σ U_j² (the discrete
    /// weighted norm) is 1.
    pub values: Vec<f64>,
}

/// Numeric modes of a single grid (no extrapolation): grid abscissae plus
/// the discrete measure step for forming inner products.
#[derive(Debug, Clone)]
pub struct SturmModes {
    pub xs: Vec<f64>,
    pub step: f64,
    pub modes: Vec<SturmMode>,
}

/// Eigenpairs on a single grid, for overlap and node diagnostics.
pub fn sturm_liouville_modes(
    params: &ModelParameters,
    k: usize,
    grid: &GridSpec,
) -> Result<SturmModes> {
    grid.validate()?;
    let half_width = resolve_half_width(params, grid, k);
    let disc = fd::assemble(params, grid.points, half_width)?;
    let evs = fd::solve_raw(&disc, k);
    let scale = 1.0 / disc.step.sqrt();
    let modes = evs
        .iter()
        .map(|&e2| {
            let v = disc.tri.eigenvector(e2);
            let values = v
                .iter()
                .zip(&disc.unfold)
                .map(|(c, u)| c * u * scale)
                .collect();
            SturmMode {
                energy: e2.max(0.0).sqrt(),
                values,
            }
        })
        .collect();
    Ok(SturmModes {
        xs: disc.xs,
        step: disc.step,
        modes,
    })
}

/// Number of strict sign changes of the analytic bound-state wavefunction on
/// the open interior of the grid; Sturm oscillation theory demands exactly n.
pub fn node_count(
    params: &ModelParameters,
    level: &QuantumLevel,
    grid: &GridSpec,
) -> Result<usize> {
    grid.validate()?;
    if grid.points < 8 * (level.n as usize + 1) {
        return Err(Error::GridTooCoarse {
            what: "not enough points to resolve the nodal pattern",
        });
    }
    // sample where the state lives: every node sits inside the classically
    // allowed region, so a few oscillator lengths beyond it suffice
    let xs: Vec<f64> = if params.lambda() < 0.0 {
        let r = params.horizon_radius();
        let h = std::f64::consts::PI / (grid.points as f64 + 1.0);
        (1..=grid.points)
            .map(|j| r * (-std::f64::consts::FRAC_PI_2 + j as f64 * h).sin())
            .collect()
    } else {
        let window = grid.domain_cap.unwrap_or_else(|| {
            let base = 8.0 / (params.mass() * params.omega()).sqrt();
            let swing = classical::amplitude(params, level.energy).unwrap_or(0.0);
            base + 1.5 * swing
        });
        let h = 2.0 * window / (grid.points as f64 + 1.0);
        (1..=grid.points).map(|j| -window + j as f64 * h).collect()
    };
    let mut values = Vec::with_capacity(xs.len());
    let mut peak: f64 = 0.0;
    for &x in &xs {
        let u = quantum::wavefunction_value(params, level, x)?;
        peak = peak.max(u.abs());
        values.push(u);
    }
    let floor = 1e-12 * peak;
    let mut count = 0;
    let mut last_sign = 0.0_f64;
    for &u in &values {
        if u.abs() <= floor {
            continue;
        }
        let sign = u.signum();
        if last_sign != 0.0 && sign != last_sign {
            count += 1;
        }
        last_sign = sign;
    }
    Ok(count)
}

/// Verdict of the truncated-norm growth study.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// (cap L, ∫_{-L}^{L} |U|² w dx), ascending in L.
    pub samples: Vec<(f64, f64)>,
    /// true when the sequence plateaus (square-integrable mode).
    pub normalizable: bool,
    /// caps were extended beyond the request to reach a verdict.
    pub extended: bool,
}

const PLATEAU_TOL: f64 = 1e-4;
const GROWTH_TOL: f64 = 1e-2;

/// Truncated norms ∫_{-L}^{L}|U|²w dx of the stationary mode at energy E in
/// symmetry sector s over increasing caps. Continuum modes (λ > 0,
/// E above threshold) must grow without plateau; bound energies plateau.
pub fn norm_divergence_check(
    params: &ModelParameters,
    energy: f64,
    s: f64,
    caps: &[f64],
) -> Result<GrowthReport> {
    if params.lambda() <= 0.0 {
        return Err(Error::ArgumentOutOfRange {
            what: "norm growth study applies to λ > 0",
        });
    }
    if s != 0.0 && s != 0.5 {
        return Err(Error::ArgumentOutOfRange {
            what: "s must be 0 or 1/2",
        });
    }
    let mut caps: Vec<f64> = caps.to_vec();
    caps.retain(|c| *c > 0.0);
    caps.sort_by(|a, b| a.total_cmp(b));
    caps.dedup();
    if caps.len() < 2 {
        return Err(Error::ArgumentOutOfRange {
            what: "need at least two increasing caps",
        });
    }
    let integrand = |x: f64| {
        let u = quantum::mode_value(params, energy, s, x).unwrap_or(0.0);
        u * u
    };
    let mut samples = Vec::with_capacity(caps.len());
    for &cap in &caps {
        let v = quadrature::integrate_weighted(params, integrand, Some(cap))?;
        samples.push((cap, v));
    }
    let mut extended = false;
    let verdict = loop {
        let (_, last) = *samples.last().unwrap();
        let (_, prev) = samples[samples.len() - 2];
        let increment = (last - prev) / last.abs().max(f64::MIN_POSITIVE);
        if increment < PLATEAU_TOL {
            break true;
        }
        if increment > GROWTH_TOL || samples.len() >= caps.len() + 3 {
            break false;
        }
        // inconclusive: push the window out another decade
        extended = true;
        let next_cap = samples.last().unwrap().0 * 10.0;
        let v = quadrature::integrate_weighted(params, integrand, Some(next_cap))?;
        samples.push((next_cap, v));
    };
    Ok(GrowthReport {
        samples,
        normalizable: verdict,
        extended,
    })
}
