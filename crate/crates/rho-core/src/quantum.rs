//! Closed-form Klein-Gordon spectra and wavefunctions.
//!
//! With `y = -λω²x²` the stationary mode equation is solved by
//! `U = (1-y)^p y^s F(p+s-√ν, p+s+√ν; 2s+1/2; y)` where
//!
//! ```text
//! ε = E/(λω),  μ = m/(λω),  ν = [(1+λ)μ² - λε²]/4,
//! s(2s-1) = 0,  4p² - 2p - μ² = 0  →  p± = [1 ± √(1+4μ²)]/4.
//! ```
//!
//! Square integrability with respect to the weight 1/√(1+λω²x²) selects
//! p = p₋ for λ > 0 (with n < -2p₋, a finite spectrum) and p = p₊ for λ < 0
//! (a countable spectrum). The quantization condition ν = (p+s+n')² truncates
//! F to a polynomial and gives
//!
//! ```text
//! E_n² = m² - λω²[4p(n+1/2) + n²],     n = 2(n'+s),
//! ```
//!
//! while λ = 0 is the flat-space branch E_n² = m² + 2mω(n+1/2) with
//! Hermite-Gaussian modes.

use crate::error::{Error, Result};
use crate::model::ModelParameters;
use crate::special;

/// Dimensionless bookkeeping (ε, μ, ν, p±) of the quantization, defined for
/// λ ≠ 0. The flat-metric member gets a flagged variant instead: ε and μ
/// diverge there and the λ = 0 branch never uses them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralParameters {
    General {
        epsilon: f64,
        mu: f64,
        nu: f64,
        p_plus: f64,
        p_minus: f64,
    },
    /// λ = 0: handled by the dedicated flat branch.
    Flat,
}

impl SpectralParameters {
    /// ν for the general variant.
    pub fn nu(&self) -> Result<f64> {
        match self {
            SpectralParameters::General { nu, .. } => Ok(*nu),
            SpectralParameters::Flat => Err(Error::FlatModel),
        }
    }
}

/// One bound level: quantum number n = 2(n'+s), parity label s ∈ {0, 1/2},
/// polynomial degree n', selected exponent p (None on the λ = 0 branch) and
/// the positive energy root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumLevel {
    pub n: u32,
    pub s: f64,
    pub nprime: u32,
    pub p: Option<f64>,
    pub energy: f64,
}

/// Ordered bound levels plus the λ-sign-dependent structure flags.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSpectrum {
    pub levels: Vec<QuantumLevel>,
    /// Largest allowed principal quantum number (λ > 0 only).
    pub n_max: Option<u32>,
    /// Lower edge of the continuous spectrum (λ > 0 only).
    pub continuum_threshold: Option<f64>,
    /// λ ≤ 0: the discrete spectrum is countable.
    pub countable: bool,
}

fn mu_squared(params: &ModelParameters) -> f64 {
    let m = params.mass() / (params.lambda() * params.omega());
    m * m
}

/// Roots of 4p² - 2p - μ² = 0. The difference form keeps p₋ accurate for
/// small μ and Vieta's relations (p₊ + p₋ = 1/2, p₊·p₋ = -μ²/4) near-exact.
fn exponent_roots(mu2: f64) -> (f64, f64) {
    let disc = (1.0 + 4.0 * mu2).sqrt();
    let p_plus = (1.0 + disc) / 4.0;
    let p_minus = -mu2 / (1.0 + disc);
    (p_plus, p_minus)
}

/// The (ε, μ, ν, p±) bookkeeping at energy E > 0.
pub fn spectral_parameters(params: &ModelParameters, energy: f64) -> Result<SpectralParameters> {
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::NonPositive {
            name: "energy",
            value: energy,
        });
    }
    let lambda = params.lambda();
    if lambda == 0.0 {
        return Ok(SpectralParameters::Flat);
    }
    let epsilon = energy / (lambda * params.omega());
    let mu = params.mass() / (lambda * params.omega());
    let nu = 0.25 * ((1.0 + lambda) * mu * mu - lambda * epsilon * epsilon);
    let (p_plus, p_minus) = exponent_roots(mu * mu);
    Ok(SpectralParameters::General {
        epsilon,
        mu,
        nu,
        p_plus,
        p_minus,
    })
}

/// The exponent kept by square integrability: p₋ for λ > 0, p₊ for λ < 0.
pub fn exponent_branch(params: &ModelParameters) -> Result<f64> {
    let lambda = params.lambda();
    if lambda == 0.0 {
        return Err(Error::FlatModel);
    }
    let (p_plus, p_minus) = exponent_roots(mu_squared(params));
    Ok(if lambda > 0.0 { p_minus } else { p_plus })
}

/// Largest normalizable principal quantum number for λ > 0: the greatest
/// integer strictly below -2p₋ = (√(1+4μ²) - 1)/2.
pub fn max_level(params: &ModelParameters) -> Option<u32> {
    if params.lambda() <= 0.0 {
        return None;
    }
    let (_, p_minus) = exponent_roots(mu_squared(params));
    let bound = -2.0 * p_minus;
    let mut n_max = bound.floor();
    if n_max == bound {
        n_max -= 1.0;
    }
    Some(n_max.max(0.0) as u32)
}

/// Lower edge m√(1+1/λ) of the continuous spectrum; absent for λ ≤ 0.
pub fn continuum_threshold(params: &ModelParameters) -> Option<f64> {
    if params.lambda() > 0.0 {
        Some(params.mass() * (1.0 + 1.0 / params.lambda()).sqrt())
    } else {
        None
    }
}

fn parity_split(n: u32) -> (f64, u32) {
    // n = 2(n'+s): even n carries s = 0, odd n carries s = 1/2
    if n % 2 == 0 {
        (0.0, n / 2)
    } else {
        (0.5, (n - 1) / 2)
    }
}

/// The bound level with principal quantum number n.
pub fn energy_level(params: &ModelParameters, n: u32) -> Result<QuantumLevel> {
    let (s, nprime) = parity_split(n);
    let lambda = params.lambda();
    let omega = params.omega();
    let m = params.mass();
    if lambda == 0.0 {
        let e2 = m * m + 2.0 * m * omega * (n as f64 + 0.5);
        return Ok(QuantumLevel {
            n,
            s,
            nprime,
            p: None,
            energy: e2.sqrt(),
        });
    }
    if let Some(n_max) = max_level(params) {
        if n > n_max {
            return Err(Error::NotNormalizable { n, n_max });
        }
    }
    let p = exponent_branch(params)?;
    let nf = n as f64;
    let e2 = m * m - lambda * omega * omega * (4.0 * p * (nf + 0.5) + nf * nf);
    Ok(QuantumLevel {
        n,
        s,
        nprime,
        p: Some(p),
        energy: e2.sqrt(),
    })
}

/// The discrete spectrum: every normalizable level for λ > 0 (exactly
/// n_max + 1 of them), the first `max_levels` levels for λ ≤ 0.
pub fn discrete_spectrum(params: &ModelParameters, max_levels: usize) -> DiscreteSpectrum {
    let max_levels = max_levels.max(1);
    let n_max = max_level(params);
    let count = match n_max {
        Some(n_max) => n_max as usize + 1,
        None => max_levels,
    };
    let levels = (0..count)
        .map(|n| energy_level(params, n as u32).expect("level within range"))
        .collect();
    DiscreteSpectrum {
        levels,
        n_max,
        continuum_threshold: continuum_threshold(params),
        countable: params.lambda() <= 0.0,
    }
}

/// `(1+λω²x²)^p` evaluated through `ln_1p` so huge |p| with tiny λω²x²
/// (the λ → 0 regime) keeps full precision.
fn metric_power(params: &ModelParameters, p: f64, x: f64) -> f64 {
    let t = params.lambda() * params.omega() * params.omega() * x * x;
    (p * t.ln_1p()).exp()
}

fn check_domain(params: &ModelParameters, x: f64) -> Result<()> {
    let domain = params.spatial_domain();
    if !domain.contains(x) {
        return Err(Error::OutsideDomain {
            x,
            radius: domain.radius(),
        });
    }
    Ok(())
}

/// Unnormalized bound-state wavefunction
/// `U(x) = (1+λω²x²)^p · x^{2s} · F(-n', 2p+2s+n'; 2s+1/2; -λω²x²)`,
/// or the Hermite-Gaussian form on the λ = 0 branch. The sign convention is
/// U > 0 as x → 0⁺.
pub fn wavefunction_value(params: &ModelParameters, level: &QuantumLevel, x: f64) -> Result<f64> {
    check_domain(params, x)?;
    match level.p {
        None => {
            // H_n carries a sign (-1)^{n'} at the origin relative to the
            // Kummer form shared by the λ ≠ 0 branches; undo it so the
            // convention U > 0 as x → 0⁺ holds across the whole family
            let sign = if level.nprime % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * nr_limit_wavefunction(params, level.n, x))
        }
        Some(p) => {
            let omega = params.omega();
            let y = -params.lambda() * omega * omega * x * x;
            let b = 2.0 * p + 2.0 * level.s + level.nprime as f64;
            let c = 2.0 * level.s + 0.5;
            let f = special::hyp2f1_polynomial(level.nprime, b, c, y)?;
            let odd_factor = if level.s == 0.0 { 1.0 } else { x };
            Ok(metric_power(params, p, x) * odd_factor * f)
        }
    }
}

/// Non-normalizable continuum mode for λ > 0 at energy above the threshold:
/// `U = (1+λω²x²)^{p₋} x^{2s} F(p₋+s-√ν, p₋+s+√ν; 2s+1/2; -λω²x²)` with the
/// conjugate-pair parameters (ν < 0) combined into a real evaluation.
pub fn scattering_state_value(params: &ModelParameters, energy: f64, s: f64, x: f64) -> Result<f64> {
    if params.lambda() <= 0.0 {
        return Err(Error::ArgumentOutOfRange {
            what: "scattering states exist only for λ > 0",
        });
    }
    if s != 0.0 && s != 0.5 {
        return Err(Error::ArgumentOutOfRange {
            what: "s must be 0 or 1/2",
        });
    }
    let threshold = continuum_threshold(params).expect("λ > 0");
    let spectral = spectral_parameters(params, energy)?;
    let nu = spectral.nu()?;
    if nu == 0.0 {
        return Err(Error::ThresholdDegenerate);
    }
    if nu > 0.0 {
        return Err(Error::BelowThreshold { energy, threshold });
    }
    let p = exponent_branch(params)?;
    let omega = params.omega();
    let y = -params.lambda() * omega * omega * x * x;
    let beta = (-nu).sqrt();
    let c = 2.0 * s + 0.5;
    let f = special::hyp2f1_conjugate_pair(p + s, beta, c, y)?;
    let odd_factor = if s == 0.0 { 1.0 } else { x };
    Ok(metric_power(params, p, x) * odd_factor * f.value)
}

/// Stationary mode at an arbitrary energy E > 0 for λ ≠ 0, used by the
/// norm-divergence diagnostics: dispatches between the polynomial/series form
/// (ν ≥ 0) and the conjugate-pair continuum form (ν < 0).
pub(crate) fn mode_value(params: &ModelParameters, energy: f64, s: f64, x: f64) -> Result<f64> {
    let spectral = spectral_parameters(params, energy)?;
    let nu = spectral.nu()?;
    let p = exponent_branch(params)?;
    let omega = params.omega();
    let y = -params.lambda() * omega * omega * x * x;
    let c = 2.0 * s + 0.5;
    let f = if nu < 0.0 {
        special::hyp2f1_conjugate_pair(p + s, (-nu).sqrt(), c, y)?.value
    } else {
        let root = nu.sqrt();
        let (a, b) = (p + s - root, p + s + root);
        // an energy sitting on (or within float noise of) a bound level makes
        // one parameter a non-positive integer; snap to the exact terminating
        // polynomial, otherwise the Pfaff route multiplies a huge prefactor
        // into a series that only cancels it in exact arithmetic
        let snap = |v: f64| {
            let r = v.round();
            (r <= 0.0 && (v - r).abs() < 1e-9 * v.abs().max(1.0)).then_some(-r as u32)
        };
        if let Some(nprime) = snap(a) {
            special::hyp2f1_polynomial(nprime, b, c, y)?
        } else if let Some(nprime) = snap(b) {
            special::hyp2f1_polynomial(nprime, a, c, y)?
        } else {
            special::hyp2f1(a, b, c, y)?.value
        }
    };
    let odd_factor = if s == 0.0 { 1.0 } else { x };
    Ok(metric_power(params, p, x) * odd_factor * f)
}

/// The common non-relativistic limit form `e^{-mωx²/2}·H_n(√(mω)·x)` shared
/// by every member of the family as λ → 0.
pub fn nr_limit_wavefunction(params: &ModelParameters, n: u32, x: f64) -> f64 {
    let mw = params.mass() * params.omega();
    (-0.5 * mw * x * x).exp() * special::hermite(n, mw.sqrt() * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn model(lambda: f64, omega: f64, mass: f64) -> ModelParameters {
        ModelParameters::new(lambda, omega, mass).unwrap()
    }

    const GOLDEN: f64 = 1.618_033_988_749_895; // (1+√5)/2

    #[test]
    fn spectral_parameters_reference_values() {
        // λ=-1, m=ω: μ² = 1, p₊ = (1+√5)/4
        let m = model(-1.0, 1.3, 1.3);
        match spectral_parameters(&m, 1.0).unwrap() {
            SpectralParameters::General { mu, p_plus, p_minus, .. } => {
                assert_relative_eq!(mu * mu, 1.0, max_relative = 1e-14);
                assert_relative_eq!(p_plus, GOLDEN / 2.0, max_relative = 1e-14);
                // Vieta
                assert_relative_eq!(p_plus + p_minus, 0.5, max_relative = 1e-13);
                assert_relative_eq!(p_plus * p_minus, -0.25, max_relative = 1e-13);
            }
            SpectralParameters::Flat => panic!("not flat"),
        }

        // λ=1, m=2, ω=1: μ = 2, p₋ = (1-√17)/4
        let m = model(1.0, 1.0, 2.0);
        match spectral_parameters(&m, 1.0).unwrap() {
            SpectralParameters::General { mu, p_minus, .. } => {
                assert_relative_eq!(mu, 2.0, max_relative = 1e-15);
                assert_relative_eq!(p_minus, -0.780_776_406_404_415_1, max_relative = 1e-14);
            }
            SpectralParameters::Flat => panic!("not flat"),
        }

        // λ=-1, ω=1, m=1: ν = E²/4 since the (1+λ)μ² term vanishes
        let m = model(-1.0, 1.0, 1.0);
        for &e in &[0.5, 1.0, 3.7] {
            let nu = spectral_parameters(&m, e).unwrap().nu().unwrap();
            assert_relative_eq!(nu, e * e / 4.0, max_relative = 1e-14);
        }

        // flat member is flagged
        let m = model(0.0, 1.0, 1.0);
        assert_eq!(spectral_parameters(&m, 1.0).unwrap(), SpectralParameters::Flat);
        assert!(matches!(
            spectral_parameters(&m, 1.0).unwrap().nu(),
            Err(Error::FlatModel)
        ));
    }

    #[test]
    fn exponent_branch_selection() {
        let m = model(1.0, 1.0, 2.0);
        assert_relative_eq!(
            exponent_branch(&m).unwrap(),
            -0.780_776_406_404_415_1,
            max_relative = 1e-14
        );
        let m = model(-1.0, 1.0, 1.0);
        assert_relative_eq!(
            exponent_branch(&m).unwrap(),
            GOLDEN / 2.0,
            max_relative = 1e-14
        );
        // μ → 0 degenerates the quadratic to roots {0, 1/2}
        let m = model(-1.0, 1.0, 1e-160);
        assert_relative_eq!(exponent_branch(&m).unwrap(), 0.5, max_relative = 1e-12);
        assert!(matches!(
            exponent_branch(&model(0.0, 1.0, 1.0)),
            Err(Error::FlatModel)
        ));
    }

    #[test]
    fn ads_levels_are_equidistant() {
        let m = model(-1.0, 1.0, 1.0);
        let e0 = energy_level(&m, 0).unwrap().energy;
        assert_relative_eq!(e0, GOLDEN, max_relative = 1e-13);
        for n in 0..8 {
            let level = energy_level(&m, n).unwrap();
            assert_relative_eq!(
                level.energy,
                GOLDEN + n as f64,
                max_relative = 1e-13
            );
        }
        // spacing deviation from ω below 1e-12
        for n in 0..7 {
            let spacing =
                energy_level(&m, n + 1).unwrap().energy - energy_level(&m, n).unwrap().energy;
            assert_abs_diff_eq!(spacing, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn flat_branch_levels() {
        let m = model(0.0, 0.1, 1.0);
        let level = energy_level(&m, 0).unwrap();
        assert_relative_eq!(level.energy, 1.1_f64.sqrt(), max_relative = 1e-15);
        assert_eq!(level.p, None);
    }

    #[test]
    fn finite_spectrum_for_positive_lambda() {
        let m = model(1.0, 1.0, 2.0);
        assert_eq!(max_level(&m), Some(1));
        let e0 = energy_level(&m, 0).unwrap().energy;
        let e1 = energy_level(&m, 1).unwrap().energy;
        // frozen from exact evaluation of the closed form
        assert_relative_eq!(e0, 2.358_294_471_182_263, max_relative = 1e-14);
        assert_relative_eq!(e1, 2.772_121_649_283_539, max_relative = 1e-14);
        let threshold = continuum_threshold(&m).unwrap();
        assert_relative_eq!(threshold, 2.0 * 2.0_f64.sqrt(), max_relative = 1e-15);
        assert!(e0 >= 2.0 && e0 < threshold);
        assert!(e1 >= 2.0 && e1 < threshold);
        assert!(matches!(
            energy_level(&m, 2),
            Err(Error::NotNormalizable { n: 2, n_max: 1 })
        ));

        let spectrum = discrete_spectrum(&m, 10);
        assert_eq!(spectrum.levels.len(), 2);
        assert_eq!(spectrum.n_max, Some(1));
        assert!(!spectrum.countable);
    }

    #[test]
    fn countable_spectrum_for_negative_lambda() {
        let m = model(-1.0, 1.0, 1.0);
        let spectrum = discrete_spectrum(&m, 4);
        assert_eq!(spectrum.levels.len(), 4);
        assert_eq!(spectrum.n_max, None);
        assert_eq!(spectrum.continuum_threshold, None);
        assert!(spectrum.countable);
        for pair in spectrum.levels.windows(2) {
            assert!(pair[1].energy > pair[0].energy);
            assert_abs_diff_eq!(pair[1].energy - pair[0].energy, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn n_max_grows_towards_flat_limit() {
        // n_max ~ m/(λω) → ∞ as λ → 0⁺
        let mut last = 0;
        for &lambda in &[1.0, 0.1, 0.01, 0.001] {
            let m = model(lambda, 1.0, 2.0);
            let n_max = max_level(&m).unwrap();
            assert!(n_max > last);
            last = n_max;
            let mu = 2.0 / lambda;
            assert!((n_max as f64) <= mu + 1.0);
            assert!((n_max as f64) >= mu - 2.0);
        }
    }

    #[test]
    fn quantization_consistency() {
        // ν evaluated at E_n equals (p+s+n')² for every emitted level
        for &(lambda, mass) in &[(-1.5, 1.0), (-1.0, 2.0), (-0.5, 2.0), (0.5, 2.0), (1.0, 2.0)] {
            let m = model(lambda, 1.0, mass);
            let spectrum = discrete_spectrum(&m, 6);
            for level in &spectrum.levels {
                let nu = spectral_parameters(&m, level.energy)
                    .unwrap()
                    .nu()
                    .unwrap();
                let p = level.p.unwrap();
                let target = (p + level.s + level.nprime as f64).powi(2);
                assert_relative_eq!(nu, target, max_relative = 1e-12);
                assert_eq!(level.n, 2 * level.nprime + (2.0 * level.s) as u32);
            }
        }
    }

    #[test]
    fn ads_identity_two_forms() {
        // at λ=-1 the closed form must equal ω²(2p₊+n)², which is the same
        // statement as the exponent quadratic 4p²-2p = μ²
        for &(omega, mass) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)] {
            let m = model(-1.0, omega, mass);
            let p_plus = exponent_branch(&m).unwrap();
            for n in 0..6 {
                let e = energy_level(&m, n).unwrap().energy;
                let alt = omega * (2.0 * p_plus + n as f64);
                assert_relative_eq!(e * e, alt * alt, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn lambda_window_placement() {
        // every λ>0 discrete level sits inside [m, m√(1+1/λ))
        for &(lambda, mass) in &[(0.5, 2.0), (1.0, 2.0), (2.0, 1.0), (0.25, 3.0)] {
            let m = model(lambda, 1.0, mass);
            let spectrum = discrete_spectrum(&m, 1);
            let threshold = continuum_threshold(&m).unwrap();
            let bound = -2.0 * exponent_branch(&m).unwrap();
            for level in &spectrum.levels {
                assert!(level.energy >= mass && level.energy < threshold);
                assert!((level.n as f64) < bound);
            }
        }
    }

    #[test]
    fn lambda_continuity_of_levels() {
        // E_n(±1e-4) within 1e-3·ω of E_n(0), error linear in λ
        let flat = model(0.0, 1.0, 1.0);
        for n in 0..=5 {
            let e_flat = energy_level(&flat, n).unwrap().energy;
            for &sign in &[1.0, -1.0] {
                let eps1 = (energy_level(&model(sign * 1e-4, 1.0, 1.0), n).unwrap().energy
                    - e_flat)
                    .abs();
                let eps2 = (energy_level(&model(sign * 1e-5, 1.0, 1.0), n).unwrap().energy
                    - e_flat)
                    .abs();
                assert!(eps1 < 1e-3, "n={n}: {eps1}");
                let ratio = eps1 / eps2;
                assert!((5.0..20.0).contains(&ratio), "n={n}: ratio {ratio}");
            }
        }
    }

    #[test]
    fn ground_state_bound_in_ads() {
        // E₀ - m > ω/2 for all m/ω, approaching ω/2 from above
        let mut last_gap = f64::INFINITY;
        for &ratio in &[1.0, 10.0, 100.0, 1000.0, 10000.0] {
            let m = model(-1.0, 1.0, ratio);
            let e0 = energy_level(&m, 0).unwrap().energy;
            let gap = e0 - ratio;
            assert!(gap > 0.5, "m/ω={ratio}: gap {gap}");
            assert!(gap < last_gap);
            last_gap = gap;
        }
        assert!(last_gap - 0.5 < 1e-3);
    }

    #[test]
    fn wavefunction_parity_and_sign() {
        for &(lambda, mass) in &[(-1.0, 1.0), (-0.5, 2.0), (0.0, 1.0), (0.5, 2.0), (1.0, 2.0)] {
            let m = model(lambda, 1.0, mass);
            let spectrum = discrete_spectrum(&m, 4);
            let r = m.horizon_radius().min(4.0);
            for level in &spectrum.levels {
                // sign convention: positive value (even) / slope (odd) at 0⁺
                let u_small = wavefunction_value(&m, level, 1e-3 * r).unwrap();
                assert!(u_small > 0.0, "λ={lambda} n={}", level.n);
                for i in 1..12 {
                    let x = 0.9 * r * (i as f64) / 12.0;
                    let plus = wavefunction_value(&m, level, x).unwrap();
                    let minus = wavefunction_value(&m, level, -x).unwrap();
                    let sign = if level.n % 2 == 0 { 1.0 } else { -1.0 };
                    assert_relative_eq!(minus, sign * plus, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn ads_ground_state_shape() {
        // n=0 at λ=-1, m=ω=1: U = (1-x²)^{p₊}, nodeless
        let m = model(-1.0, 1.0, 1.0);
        let level = energy_level(&m, 0).unwrap();
        let p_plus = level.p.unwrap();
        for i in 0..20 {
            let x = -0.95 + 0.1 * i as f64;
            if x.abs() >= 1.0 {
                continue;
            }
            let u = wavefunction_value(&m, &level, x).unwrap();
            assert_relative_eq!(
                u,
                (1.0 - x * x).powf(p_plus),
                max_relative = 1e-13
            );
            assert!(u > 0.0);
        }
    }

    #[test]
    fn flat_wavefunction_is_hermite_gaussian() {
        let m = model(0.0, 1.0, 1.0);
        let level = energy_level(&m, 2).unwrap();
        // nodes of H₂ at ±1/√2; |value| at x=1 is e^{-1/2}·2
        let node = 0.5_f64.sqrt();
        assert_abs_diff_eq!(
            wavefunction_value(&m, &level, node).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            wavefunction_value(&m, &level, 1.0).unwrap().abs(),
            (-0.5_f64).exp() * 2.0,
            max_relative = 1e-13
        );
        // proportional to the shared non-relativistic limit form; the n' = 1
        // sign flip keeps U(0⁺) > 0
        for i in -8..=8 {
            let x = 0.4 * i as f64;
            assert_eq!(
                wavefunction_value(&m, &level, x).unwrap(),
                -nr_limit_wavefunction(&m, 2, x)
            );
        }
        assert!(wavefunction_value(&m, &level, 1e-4).unwrap() > 0.0);
    }

    #[test]
    fn wavefunction_outside_domain_is_an_error() {
        let m = model(-1.0, 1.0, 1.0);
        let level = energy_level(&m, 0).unwrap();
        assert!(matches!(
            wavefunction_value(&m, &level, 1.0),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn scattering_state_basics() {
        let m = model(1.0, 1.0, 2.0);
        // at x=0 the prefactors are 1 and F(0) = 1
        assert_relative_eq!(
            scattering_state_value(&m, 3.0, 0.0, 0.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        // odd sector vanishes at the origin
        assert_eq!(scattering_state_value(&m, 3.0, 0.5, 0.0).unwrap(), 0.0);
        // below threshold and at threshold are rejected
        assert!(matches!(
            scattering_state_value(&m, 2.5, 0.0, 1.0),
            Err(Error::BelowThreshold { .. })
        ));
        assert!(matches!(
            scattering_state_value(&model(-1.0, 1.0, 1.0), 3.0, 0.0, 0.1),
            Err(Error::ArgumentOutOfRange { .. })
        ));
        assert!(matches!(
            scattering_state_value(&m, 3.0, 0.3, 1.0),
            Err(Error::ArgumentOutOfRange { .. })
        ));
        // bounded oscillation far out: |U| stays O(1)
        for &x in &[5.0, 50.0, 500.0] {
            let u = scattering_state_value(&m, 3.0, 0.0, x).unwrap();
            assert!(u.abs() < 10.0, "x={x}: {u}");
        }
    }

    #[test]
    fn mode_value_matches_bound_state_at_level_energy() {
        // the general-energy evaluator reduces to the polynomial bound form
        let m = model(1.0, 1.0, 2.0);
        for n in 0..2_u32 {
            let level = energy_level(&m, n).unwrap();
            for i in 1..=10 {
                let x = 0.7 * i as f64;
                let general = mode_value(&m, level.energy, level.s, x).unwrap();
                let bound = wavefunction_value(&m, &level, x).unwrap();
                assert_relative_eq!(general, bound, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn nr_limit_wavefunction_values() {
        let m = model(-1.0, 1.0, 1.0);
        assert!(nr_limit_wavefunction(&m, 0, 0.3) > 0.0);
        assert_eq!(nr_limit_wavefunction(&m, 1, 0.0), 0.0);
        assert_relative_eq!(
            nr_limit_wavefunction(&m, 2, 1.0),
            (-0.5_f64).exp() * 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn wavefunction_pointwise_flat_limit() {
        // λ = ±1e-5 wavefunctions match the Hermite-Gaussian limit after
        // rescaling, at points where the limit form is not small
        for &sign in &[1.0, -1.0] {
            let deformed = model(sign * 1e-5, 1.0, 1.0);
            let flat = model(0.0, 1.0, 1.0);
            for n in 0..4_u32 {
                let level = energy_level(&deformed, n).unwrap();
                let limit_peak = (0..200)
                    .map(|i| nr_limit_wavefunction(&flat, n, -4.0 + 0.04 * i as f64).abs())
                    .fold(0.0, f64::max);
                // rescale by the ratio at a common reference point
                let x_ref = 0.45;
                let scale = wavefunction_value(&deformed, &level, x_ref).unwrap()
                    / nr_limit_wavefunction(&flat, n, x_ref);
                for i in 0..80 {
                    let x = -4.0 + 0.1 * i as f64;
                    let target = nr_limit_wavefunction(&flat, n, x);
                    if target.abs() < 0.1 * limit_peak {
                        continue;
                    }
                    let got = wavefunction_value(&deformed, &level, x).unwrap() / scale;
                    assert_relative_eq!(got, target, max_relative = 1e-3);
                }
            }
        }
    }
}
