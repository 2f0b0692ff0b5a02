//! Runtime verification suites: the library's invariants bundled as
//! pass/fail checks with measured values and pinned tolerances.

use std::io::Write;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rho_core::classical::{
    amplitude, effective_frequency, integrate_geodesic, open_motion_threshold, orbit_from_energy,
};
use rho_core::numeric::{gram_matrix, node_count, normalize, sturm_liouville_eigen, GridSpec};
use rho_core::quantum::{
    discrete_spectrum, energy_level, exponent_branch, max_level, nr_limit_wavefunction,
    spectral_parameters, wavefunction_value,
};
use rho_core::special::{hermite, hyp1f1_polynomial, hyp2f1, hyp2f1_polynomial};
use rho_core::ModelParameters;

use crate::output::{fmt_f64, open_sink, Format};
use crate::{AppError, CmdResult, OutputArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Classical,
    Quantum,
    Limits,
    Special,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// which invariant group to run
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// λ values for the quantum oracle sweep
    #[arg(long, value_delimiter = ',', default_value = "-1,-0.5,0,0.5,1", allow_negative_numbers = true)]
    lambda_set: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

struct Check {
    name: String,
    measured: f64,
    tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
        }
    }

    fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

fn model(lambda: f64, omega: f64, mass: f64) -> ModelParameters {
    ModelParameters::new(lambda, omega, mass).expect("valid test model")
}

fn classical_suite() -> Vec<Check> {
    let mut checks = Vec::new();

    // randomized orbit oracle
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut worst_dev: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    for _ in 0..12 {
        let m = model(
            rng.random_range(-2.0..2.0),
            rng.random_range(0.5..2.0),
            rng.random_range(0.5..2.0),
        );
        let e_top = open_motion_threshold(&m).unwrap_or(3.0 * m.mass());
        let energy = m.mass() + (e_top - m.mass()) * rng.random_range(0.05..0.9);
        let orbit = orbit_from_energy(&m, energy, 0.0).expect("oscillatory");
        let t_max = 3.0 * orbit.period();
        let path = integrate_geodesic(
            &m,
            0.0,
            orbit.omega_eff * orbit.amplitude,
            t_max,
            t_max / 128.0,
        )
        .expect("integration");
        for s in &path.samples {
            worst_dev = worst_dev.max((s.x - orbit.position(s.t)).abs());
        }
        worst_drift = worst_drift.max(path.energy_drift);
    }
    checks.push(Check::new("classical.orbit_oracle.max_deviation", worst_dev, 1e-6));
    checks.push(Check::new("classical.orbit_oracle.energy_drift", worst_drift, 1e-9));

    // rest-energy limits and the maximum-speed identity
    let mut worst_freq: f64 = 0.0;
    let mut worst_amp: f64 = 0.0;
    let mut worst_speed: f64 = 0.0;
    for &lambda in &[-2.0, -1.0, -0.3, 0.0, 0.6, 1.7] {
        let m = model(lambda, 1.3, 0.9);
        worst_freq = worst_freq.max((effective_frequency(&m, 0.9).unwrap() - 1.3).abs() / 1.3);
        worst_amp = worst_amp.max(amplitude(&m, 0.9).unwrap().abs());
        let e_top = open_motion_threshold(&m).unwrap_or(4.0 * 0.9);
        for i in 1..12 {
            let e = 0.9 + (e_top - 0.9) * 0.92 * i as f64 / 12.0;
            let prod = effective_frequency(&m, e).unwrap() * amplitude(&m, e).unwrap();
            let vmax = (1.0 - (0.9 / e) * (0.9 / e)).sqrt();
            worst_speed = worst_speed.max((prod - vmax).abs() / vmax);
        }
    }
    checks.push(Check::new("classical.rest_energy_frequency", worst_freq, 1e-14));
    checks.push(Check::new("classical.rest_energy_amplitude", worst_amp, 1e-15));
    checks.push(Check::new("classical.max_speed_identity", worst_speed, 1e-12));

    checks.push(classical_scaling_check("classical.nr_scaling_decades"));
    checks
}

/// Classical NR limit: frequency and amplitude errors must scale linearly in
/// E_nr/m over two decades; measured as |log10(ratio/100)|.
fn classical_scaling_check(name: &str) -> Check {
    let mut worst: f64 = 0.0;
    for &lambda in &[-0.5, 0.0, 0.8] {
        let m = model(lambda, 1.3, 1.0);
        let errs = |eps: f64| {
            let e = 1.0 + eps;
            let freq = effective_frequency(&m, e).unwrap();
            let a = amplitude(&m, e).unwrap();
            let a2_nr = 2.0 * eps / (1.3 * 1.3);
            (((freq - 1.3) / 1.3).abs(), ((a * a - a2_nr) / (a * a)).abs())
        };
        let (f4, a4) = errs(1e-4);
        let (f6, a6) = errs(1e-6);
        worst = worst.max(((f4 / f6) / 100.0).log10().abs());
        worst = worst.max(((a4 / a6) / 100.0).log10().abs());
    }
    Check::new(name, worst, 0.3)
}

fn quantum_suite(lambda_set: &[f64]) -> Vec<Check> {
    let mut checks = Vec::new();

    for &lambda in lambda_set {
        let m = model(lambda, 1.0, 2.0);
        let k = match max_level(&m) {
            Some(n_max) => (n_max as usize + 1).min(5),
            None => 5,
        };
        let analytic = discrete_spectrum(&m, k);
        let grid = GridSpec::recommended(&m, k as u32);
        let worst = match sturm_liouville_eigen(&m, k, &grid) {
            Ok(numeric) => analytic
                .levels
                .iter()
                .zip(&numeric.energies)
                .map(|(level, got)| ((got - level.energy) / level.energy).abs())
                .fold(0.0_f64, f64::max),
            Err(_) => f64::INFINITY,
        };
        checks.push(Check::new(
            format!("quantum.oracle_agreement[lambda={lambda}]"),
            worst,
            1e-6,
        ));
    }

    // quantization bookkeeping: ν(E_n) = (p+s+n')²
    let mut worst_quant: f64 = 0.0;
    let mut worst_window: f64 = 0.0;
    let mut node_mismatches = 0.0;
    let mut worst_parity: f64 = 0.0;
    let node_grid = GridSpec::new(2048, None);
    for &lambda in lambda_set {
        if lambda == 0.0 {
            continue;
        }
        let m = model(lambda, 1.0, 2.0);
        let spectrum = discrete_spectrum(&m, 5);
        for level in &spectrum.levels {
            let nu = spectral_parameters(&m, level.energy)
                .unwrap()
                .nu()
                .unwrap();
            let target = (level.p.unwrap() + level.s + level.nprime as f64).powi(2);
            worst_quant = worst_quant.max((nu - target).abs() / target.abs().max(1e-30));
            if let Some(threshold) = spectrum.continuum_threshold {
                worst_window = worst_window.max((level.energy - threshold).max(0.0));
                worst_window = worst_window.max((m.mass() - level.energy).max(0.0));
            }
            if node_count(&m, level, &node_grid).unwrap() != level.n as usize {
                node_mismatches += 1.0;
            }
            let r = m.horizon_radius();
            for i in 1..8 {
                let x = 0.8 * r.min(4.0) * i as f64 / 8.0;
                let plus = wavefunction_value(&m, level, x).unwrap();
                let minus = wavefunction_value(&m, level, -x).unwrap();
                let sign = if level.n % 2 == 0 { 1.0 } else { -1.0 };
                worst_parity =
                    worst_parity.max((minus - sign * plus).abs() / plus.abs().max(1e-30));
            }
        }
    }
    checks.push(Check::new("quantum.quantization_consistency", worst_quant, 1e-12));
    checks.push(Check::new("quantum.level_window_violation", worst_window, 0.0));
    checks.push(Check::new("quantum.node_count_mismatches", node_mismatches, 0.0));
    checks.push(Check::new("quantum.parity_symmetry", worst_parity, 1e-12));

    // AdS identity: Eq-level energies equal ω(2p₊+n)
    let mut worst_ads: f64 = 0.0;
    let m = model(-1.0, 1.0, 2.0);
    let p_plus = exponent_branch(&m).unwrap();
    for n in 0..6 {
        let e = energy_level(&m, n).unwrap().energy;
        let alt = 2.0 * p_plus + n as f64;
        worst_ads = worst_ads.max((e * e - alt * alt).abs() / (alt * alt));
    }
    checks.push(Check::new("quantum.ads_identity", worst_ads, 1e-12));

    // orthonormality of the first four normalized states
    let mut worst_gram: f64 = 0.0;
    let quad_grid = GridSpec::default();
    for &lambda in lambda_set {
        let m = model(lambda, 1.0, 2.0);
        if max_level(&m).is_some_and(|n_max| n_max < 3) {
            continue;
        }
        let states: Vec<_> = (0..4)
            .map(|n| normalize(&m, &energy_level(&m, n).unwrap(), &quad_grid).unwrap())
            .collect();
        let gram = gram_matrix(&m, &states, &quad_grid).unwrap();
        for (i, row) in gram.iter().enumerate() {
            for (j, &val) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst_gram = worst_gram.max((val - target).abs());
            }
        }
    }
    checks.push(Check::new("quantum.orthonormality", worst_gram, 1e-8));
    checks
}

fn limits_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(classical_scaling_check("limits.classical_nr_scaling"));

    // AdS ground-state gap (E₀-m)/ω sits in (1/2, 1/2 + 1e-3] at m/ω = 1000
    let heavy = model(-1.0, 1.0, 1000.0);
    let gap = energy_level(&heavy, 0).unwrap().energy - 1000.0;
    let measured = if gap > 0.5 { gap - 0.5 } else { f64::INFINITY };
    checks.push(Check::new("limits.ads_ground_state_gap", measured, 1e-3));

    // λ-continuity of the first six levels
    let flat = model(0.0, 1.0, 1.0);
    let mut worst_shift: f64 = 0.0;
    for n in 0..=5 {
        let base = energy_level(&flat, n).unwrap().energy;
        for &sign in &[1.0, -1.0] {
            let shifted = energy_level(&model(sign * 1e-4, 1.0, 1.0), n)
                .unwrap()
                .energy;
            worst_shift = worst_shift.max((shifted - base).abs());
        }
    }
    checks.push(Check::new("limits.lambda_continuity", worst_shift, 1e-3));

    // pointwise wavefunction limit at λ = ±1e-5 after rescaling
    let mut worst_wave: f64 = 0.0;
    for &sign in &[1.0, -1.0] {
        let deformed = model(sign * 1e-5, 1.0, 1.0);
        for n in 0..4_u32 {
            let level = energy_level(&deformed, n).unwrap();
            let peak = (0..160)
                .map(|i| nr_limit_wavefunction(&flat, n, -4.0 + 0.05 * i as f64).abs())
                .fold(0.0_f64, f64::max);
            let x_ref = 0.45;
            let scale = wavefunction_value(&deformed, &level, x_ref).unwrap()
                / nr_limit_wavefunction(&flat, n, x_ref);
            for i in 0..80 {
                let x = -4.0 + 0.1 * i as f64;
                let target = nr_limit_wavefunction(&flat, n, x);
                if target.abs() < 0.1 * peak {
                    continue;
                }
                let got = wavefunction_value(&deformed, &level, x).unwrap() / scale;
                worst_wave = worst_wave.max(((got - target) / target).abs());
            }
        }
    }
    checks.push(Check::new("limits.wavefunction_pointwise", worst_wave, 1e-3));
    checks
}

fn special_suite() -> Vec<Check> {
    let mut checks = Vec::new();

    // dual Pfaff routes and the direct evaluation agree on y < 0
    let mut worst_pfaff: f64 = 0.0;
    for &(a, b, c) in &[(0.45, 2.15, 0.5), (-0.7, 1.3, 1.5), (1.618, 2.1, 0.5)] {
        for i in 1..=25 {
            let y = -2.0 * i as f64;
            let w = y / (y - 1.0);
            let lo = (1.0 - y).powf(-a) * hyp2f1(a, c - b, c, w).unwrap().value;
            let hi = (1.0 - y).powf(-b) * hyp2f1(b, c - a, c, w).unwrap().value;
            let direct = hyp2f1(a, b, c, y).unwrap().value;
            let scale = lo.abs().max(1e-8);
            worst_pfaff = worst_pfaff.max((lo - hi).abs() / scale);
            worst_pfaff = worst_pfaff.max((direct - lo).abs() / scale);
        }
    }
    checks.push(Check::new("special.pfaff_consistency", worst_pfaff, 1e-12));

    // terminating series vs explicit polynomial
    let mut worst_poly: f64 = 0.0;
    for nprime in 0..7_u32 {
        for &(b, c) in &[(1.9, 1.5), (-0.6, 0.5), (3.2, 1.5)] {
            for i in 1..20 {
                let y = -0.95 + 1.9 * i as f64 / 20.0;
                let poly = hyp2f1_polynomial(nprime, b, c, y).unwrap();
                let series = hyp2f1(-(nprime as f64), b, c, y).unwrap().value;
                worst_poly = worst_poly.max((poly - series).abs() / poly.abs().max(1.0));
            }
        }
    }
    checks.push(Check::new("special.polynomial_vs_series", worst_poly, 1e-12));

    // Hermite connection: H_n(z) ∝ z^{2s}·₁F₁(-n'; 2s+1/2; z²)
    let mut worst_hermite: f64 = 0.0;
    for n in 0..9_u32 {
        let s = if n % 2 == 0 { 0.0 } else { 0.5 };
        let nprime = n / 2;
        let c = 2.0 * s + 0.5;
        let mut ratio0: Option<f64> = None;
        for i in 1..40 {
            let z = 0.05 + 0.1 * i as f64;
            let h = hermite(n, z);
            let kum = z.powf(2.0 * s) * hyp1f1_polynomial(nprime, c, z * z).unwrap();
            if kum.abs() < 1e-9 || h.abs() < 1e-9 {
                continue;
            }
            let ratio = h / kum;
            match ratio0 {
                None => ratio0 = Some(ratio),
                Some(r0) => worst_hermite = worst_hermite.max(((ratio - r0) / r0).abs()),
            }
        }
    }
    checks.push(Check::new("special.hermite_connection", worst_hermite, 1e-10));

    // recurrence vs explicit coefficients, exact in integer arithmetic
    let explicit4 = |z: f64| 16.0 * z.powi(4) - 48.0 * z * z + 12.0;
    let mut mismatches = 0.0;
    for z in -3..=3 {
        if hermite(4, z as f64) != explicit4(z as f64) {
            mismatches += 1.0;
        }
    }
    checks.push(Check::new("special.hermite_recurrence_exact", mismatches, 0.0));
    checks
}

pub fn run(args: VerifyArgs) -> CmdResult {
    let mut checks = Vec::new();
    if matches!(args.suite, Suite::Classical | Suite::All) {
        checks.extend(classical_suite());
    }
    if matches!(args.suite, Suite::Quantum | Suite::All) {
        checks.extend(quantum_suite(&args.lambda_set));
    }
    if matches!(args.suite, Suite::Limits | Suite::All) {
        checks.extend(limits_suite());
    }
    if matches!(args.suite, Suite::Special | Suite::All) {
        checks.extend(special_suite());
    }

    let all_passed = checks.iter().all(Check::passed);
    let suite_name = format!("{:?}", args.suite).to_lowercase();

    let mut sink = open_sink(args.out.output.as_deref())?;
    match args.format {
        Format::Json => {
            let mut s = String::from("{");
            s.push_str(&format!("\"suite\":\"{suite_name}\","));
            s.push_str(&format!("\"passed\":{all_passed},"));
            s.push_str("\"checks\":[");
            for (i, check) in checks.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&format!(
                    "{{\"name\":\"{}\",\"passed\":{},\"measured\":{},\"tolerance\":{}}}",
                    check.name,
                    check.passed(),
                    fmt_f64(check.measured),
                    fmt_f64(check.tolerance)
                ));
            }
            s.push_str("]}");
            writeln!(sink, "{s}")?;
        }
        Format::Csv => {
            writeln!(sink, "# suite={suite_name}")?;
            writeln!(sink, "name,passed,measured,tolerance")?;
            for check in &checks {
                writeln!(
                    sink,
                    "{},{},{},{}",
                    check.name,
                    check.passed(),
                    fmt_f64(check.measured),
                    fmt_f64(check.tolerance)
                )?;
            }
        }
    }
    sink.flush().map_err(AppError::from)?;

    if !all_passed {
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        return Err(AppError::Verification(format!(
            "{} check(s) failed: {}",
            failed.len(),
            failed.join(", ")
        )));
    }
    Ok(())
}
