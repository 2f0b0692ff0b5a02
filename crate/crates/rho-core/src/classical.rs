//! Classical free motion: closed-form orbits and an independent adaptive
//! geodesic integrator used as oracle.
//!
//! On every member of the family the geodesic equation combined with energy
//! conservation closes to `ẍ + Ω²x = 0` with the energy-dependent effective
//! frequency
//!
//! ```text
//! Ω = (ω/E)·√((1+λ)m² - λE²),    x(t) = a·sin(Ω(t - t0)),
//! a = (1/ω)·√((E² - m²)/((1+λ)m² - λE²)).
//! ```
//!
//! For λ > 0 the radicand changes sign at E = m√(1+1/λ) and the motion opens
//! up; for λ ≤ 0 every energy E ≥ m oscillates.

use crate::error::{Error, Result};
use crate::model::ModelParameters;

/// Classification of the classical motion at a given energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionClass {
    Oscillatory,
    Threshold,
    Open,
}

impl MotionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            MotionClass::Oscillatory => "oscillatory",
            MotionClass::Threshold => "threshold",
            MotionClass::Open => "open",
        }
    }
}

/// A closed classical orbit `x(t) = a·sin(Ω(t - t0))`.
///
/// The phase convention fixes x(t0) = 0 with ẋ(t0) > 0, so a ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOrbit {
    pub energy: f64,
    pub omega_eff: f64,
    pub amplitude: f64,
    pub phase_time: f64,
    pub motion_class: MotionClass,
}

impl ClassicalOrbit {
    /// Position on the orbit; |x| ≤ a for all t.
    pub fn position(&self, t: f64) -> f64 {
        self.amplitude * (self.omega_eff * (t - self.phase_time)).sin()
    }

    /// Coordinate velocity ẋ(t).
    pub fn velocity(&self, t: f64) -> f64 {
        self.amplitude * self.omega_eff * (self.omega_eff * (t - self.phase_time)).cos()
    }

    /// Coordinate period 2π/Ω (infinite for the rest orbit Ω = 0 case).
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega_eff
    }
}

/// One recorded point of a numerically integrated geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

/// Sampled numerical solution of the geodesic equation together with the
/// worst relative energy drift observed over the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub samples: Vec<GeodesicSample>,
    pub energy_drift: f64,
}

/// Tolerances of the embedded Runge-Kutta 4/5 integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 50_000_000,
        }
    }
}

/// Fraction of the horizon radius at which integration aborts for λ < 0.
const HORIZON_GUARD: f64 = 1e-8;

fn radicand(params: &ModelParameters, energy: f64) -> Result<f64> {
    let m = params.mass();
    if !energy.is_finite() {
        return Err(Error::NonFinite {
            name: "energy",
            value: energy,
        });
    }
    if energy < m {
        return Err(Error::EnergyBelowRest { energy, mass: m });
    }
    let lambda = params.lambda();
    let r = (1.0 + lambda) * m * m - lambda * energy * energy;
    // exact threshold yields r = 0 up to roundoff of the two products
    let scale = ((1.0 + lambda).abs() * m * m).max(lambda.abs() * energy * energy);
    let tol = 8.0 * f64::EPSILON * scale;
    if r < -tol {
        return Err(Error::OpenMotion {
            energy,
            threshold: open_motion_threshold(params).unwrap_or(f64::INFINITY),
        });
    }
    Ok(r.max(0.0))
}

/// Energy above which the motion is open (λ > 0 only).
pub fn open_motion_threshold(params: &ModelParameters) -> Option<f64> {
    if params.lambda() > 0.0 {
        Some(params.mass() * (1.0 + 1.0 / params.lambda()).sqrt())
    } else {
        None
    }
}

/// Effective frequency Ω(E). Independent of E only at λ = -1.
pub fn effective_frequency(params: &ModelParameters, energy: f64) -> Result<f64> {
    let r = radicand(params, energy)?;
    Ok(params.omega() / energy * r.sqrt())
}

/// Oscillation amplitude a(E); zero at the rest energy.
pub fn amplitude(params: &ModelParameters, energy: f64) -> Result<f64> {
    let r = radicand(params, energy)?;
    let m = params.mass();
    let num = (energy - m) * (energy + m);
    if num == 0.0 {
        return Ok(0.0);
    }
    if r == 0.0 {
        // E sits exactly on the open-motion boundary: no finite amplitude
        return Err(Error::NotOscillatory { class: "threshold" });
    }
    Ok((num / r).sqrt() / params.omega())
}

/// Classify the motion at energy E ≥ m.
pub fn classify_motion(params: &ModelParameters, energy: f64) -> Result<MotionClass> {
    let m = params.mass();
    if !energy.is_finite() {
        return Err(Error::NonFinite {
            name: "energy",
            value: energy,
        });
    }
    if energy < m {
        return Err(Error::EnergyBelowRest { energy, mass: m });
    }
    match open_motion_threshold(params) {
        None => Ok(MotionClass::Oscillatory),
        Some(threshold) => {
            let tol = 4.0 * f64::EPSILON * threshold;
            if (energy - threshold).abs() <= tol {
                Ok(MotionClass::Threshold)
            } else if energy < threshold {
                Ok(MotionClass::Oscillatory)
            } else {
                Ok(MotionClass::Open)
            }
        }
    }
}

/// Build the closed-form orbit at energy E with phase fixed by x(t0) = 0,
/// ẋ(t0) > 0.
pub fn orbit_from_energy(params: &ModelParameters, energy: f64, t0: f64) -> Result<ClassicalOrbit> {
    let class = classify_motion(params, energy)?;
    if class != MotionClass::Oscillatory {
        return Err(Error::NotOscillatory {
            class: class.as_str(),
        });
    }
    Ok(ClassicalOrbit {
        energy,
        omega_eff: effective_frequency(params, energy)?,
        amplitude: amplitude(params, energy)?,
        phase_time: t0,
        motion_class: class,
    })
}

/// Conserved energy of a kinematic state, inverting the first integral
/// `ẋ² = (g00/g11)(m²g00/E² - 1)` under the signed-g11 convention:
/// `E = m·g00/√(g00 + g11·ẋ²)`.
pub fn energy_from_state(params: &ModelParameters, x: f64, v: f64) -> Result<f64> {
    let g = params.metric_components(x)?;
    let disc = g.g00 + g.g11 * v * v;
    if !(disc > 0.0) {
        return Err(Error::UnphysicalState { x, v });
    }
    Ok(params.mass() * g.g00 / disc.sqrt())
}

/// Coordinate acceleration from the geodesic equation,
/// `ẍ = g00,x/(2g11) - ẋ²(g11,x/(2g11) - g00,x/g00)`.
fn acceleration(params: &ModelParameters, x: f64, v: f64) -> f64 {
    let om2 = params.omega() * params.omega();
    let lambda = params.lambda();
    let b = 1.0 + lambda * om2 * x * x;
    let a = b + om2 * x * x;
    let ap = 2.0 * (1.0 + lambda) * om2 * x;
    let bp = 2.0 * lambda * om2 * x;
    let g00 = a / b;
    let g11 = -a / (b * b);
    let g00x = (ap * b - a * bp) / (b * b);
    let g11x = -(ap * b - 2.0 * a * bp) / (b * b * b);
    g00x / (2.0 * g11) - v * v * (g11x / (2.0 * g11) - g00x / g00)
}

// Dormand-Prince 5(4) tableau (the system is autonomous, so the stage
// times are not needed)
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Rk45<'a> {
    params: &'a ModelParameters,
    opts: IntegratorOptions,
    guard_radius: f64,
    t: f64,
    x: f64,
    v: f64,
    h: f64,
    steps: usize,
}

impl<'a> Rk45<'a> {
    fn new(params: &'a ModelParameters, opts: IntegratorOptions, x0: f64, v0: f64) -> Self {
        let r = params.horizon_radius();
        Self {
            params,
            opts,
            guard_radius: if r.is_finite() {
                (1.0 - HORIZON_GUARD) * r
            } else {
                f64::INFINITY
            },
            t: 0.0,
            x: x0,
            v: v0,
            h: 1e-3 / params.omega(),
            steps: 0,
        }
    }

    fn rhs(&self, x: f64, v: f64) -> Option<(f64, f64)> {
        if x.abs() >= self.guard_radius {
            return None;
        }
        Some((v, acceleration(self.params, x, v)))
    }

    fn horizon_error(&self) -> Error {
        Error::HorizonApproach {
            x: self.x,
            radius: self.params.horizon_radius(),
            margin: HORIZON_GUARD,
        }
    }

    /// Advance the state to exactly `target` time.
    fn advance_to(&mut self, target: f64) -> Result<()> {
        let mut rejects = 0;
        while self.t < target {
            self.steps += 1;
            if self.steps > self.opts.max_steps {
                return Err(Error::StepFailure { t: self.t, h: self.h });
            }
            let h = self.h.min(target - self.t);
            let mut k = [[0.0_f64; 2]; 7];
            let k0 = self
                .rhs(self.x, self.v)
                .ok_or_else(|| self.horizon_error())?;
            k[0] = [k0.0, k0.1];
            let mut stage_ok = true;
            for i in 1..7 {
                let mut xs = self.x;
                let mut vs = self.v;
                for (j, kj) in k.iter().enumerate().take(i) {
                    let aij = A[i - 1][j];
                    xs += h * aij * kj[0];
                    vs += h * aij * kj[1];
                }
                match self.rhs(xs, vs) {
                    Some((dx, dv)) => k[i] = [dx, dv],
                    None => {
                        stage_ok = false;
                        break;
                    }
                }
            }
            if stage_ok {
                let mut y5 = [self.x, self.v];
                let mut y4 = [self.x, self.v];
                for (j, kj) in k.iter().enumerate() {
                    y5[0] += h * B5[j] * kj[0];
                    y5[1] += h * B5[j] * kj[1];
                    y4[0] += h * B4[j] * kj[0];
                    y4[1] += h * B4[j] * kj[1];
                }
                let mut err: f64 = 0.0;
                for d in 0..2 {
                    let scale = self.opts.abs_tol
                        + self.opts.rel_tol * y5[d].abs().max([self.x, self.v][d].abs());
                    let e = (y5[d] - y4[d]) / scale;
                    err += e * e;
                }
                err = (err / 2.0).sqrt();
                if err <= 1.0 {
                    self.t += h;
                    self.x = y5[0];
                    self.v = y5[1];
                    if self.x.abs() >= self.guard_radius {
                        return Err(self.horizon_error());
                    }
                    rejects = 0;
                    let grow = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    self.h = (h * grow).min(target.abs().max(1.0));
                    continue;
                }
                self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
            } else {
                // a stage probed past the horizon guard: retry with a smaller step
                self.h = h * 0.25;
            }
            rejects += 1;
            if rejects > 60 || self.h < 1e-14 * self.t.abs().max(1.0) {
                if self.guard_radius.is_finite()
                    && (self.guard_radius - self.x.abs()) < 1e-6 * self.guard_radius
                {
                    return Err(self.horizon_error());
                }
                return Err(Error::StepFailure { t: self.t, h: self.h });
            }
        }
        Ok(())
    }
}

/// Integrate the geodesic equation from (x0, ẋ0) at t = 0, sampling every
/// `sample_dt` up to `t_max`, with default tolerances.
pub fn integrate_geodesic(
    params: &ModelParameters,
    x0: f64,
    v0: f64,
    t_max: f64,
    sample_dt: f64,
) -> Result<GeodesicPath> {
    integrate_geodesic_with(params, x0, v0, t_max, sample_dt, IntegratorOptions::default())
}

/// As [`integrate_geodesic`], with explicit integrator tolerances.
pub fn integrate_geodesic_with(
    params: &ModelParameters,
    x0: f64,
    v0: f64,
    t_max: f64,
    sample_dt: f64,
    opts: IntegratorOptions,
) -> Result<GeodesicPath> {
    if !(sample_dt > 0.0) || !sample_dt.is_finite() {
        return Err(Error::NonPositive {
            name: "sample_dt",
            value: sample_dt,
        });
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::NonPositive {
            name: "t_max",
            value: t_max,
        });
    }
    // validates x0 ∈ D and that the state is kinematically allowed
    let e0 = energy_from_state(params, x0, v0)?;

    let mut sample_times: Vec<f64> = Vec::new();
    let n = (t_max / sample_dt).floor() as usize;
    for k in 0..=n {
        sample_times.push(k as f64 * sample_dt);
    }
    if t_max - n as f64 * sample_dt > 1e-9 * sample_dt {
        sample_times.push(t_max);
    }

    let mut rk = Rk45::new(params, opts, x0, v0);
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut drift: f64 = 0.0;
    for &t in &sample_times {
        rk.advance_to(t)?;
        let e = energy_from_state(params, rk.x, rk.v)?;
        drift = drift.max(((e - e0) / e0).abs());
        samples.push(GeodesicSample {
            t,
            x: rk.x,
            v: rk.v,
        });
    }
    Ok(GeodesicPath {
        samples,
        energy_drift: drift,
    })
}
