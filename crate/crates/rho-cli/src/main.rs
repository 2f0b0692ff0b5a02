//! `rho` — spectra, trajectories, wavefunctions, verification suites and
//! parameter scans for the one-parameter family of geometric relativistic
//! oscillator models.
//!
//! All quantities are in natural units (ħ = c = 1) with ω as the base scale:
//! energies and masses are in units of ω, lengths in 1/ω.
//!
//! Exit codes: 0 success, 2 usage/validation error, 3 verification failure.

mod checks;
mod output;
mod scan;
mod spectrum;
mod trajectory;
mod wavefunction;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum AppError {
    /// invalid flags or parameters (exit 2)
    Usage(String),
    /// an oracle or invariant check failed beyond tolerance (exit 3)
    Verification(String),
}

impl From<rho_core::Error> for AppError {
    fn from(err: rho_core::Error) -> Self {
        AppError::Usage(err.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Usage(format!("i/o error: {err}"))
    }
}

pub type CmdResult = Result<(), AppError>;

#[derive(Parser)]
#[command(
    name = "rho",
    version,
    about = "Geometric relativistic harmonic oscillator models: closed-form results with independent numerical oracles",
    after_help = "Units: natural units with ħ = c = 1; --omega sets the scale (energies in units of ω)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Model parameters shared by every subcommand.
#[derive(Args, Clone, Copy)]
pub struct ModelArgs {
    /// deformation parameter λ of the metric family (λ = -1: AdS, 0: flat)
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    /// oscillator frequency ω > 0
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// particle mass m > 0
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
}

impl ModelArgs {
    pub fn build(&self) -> Result<rho_core::ModelParameters, AppError> {
        Ok(rho_core::ModelParameters::new(
            self.lambda,
            self.omega,
            self.mass,
        )?)
    }
}

#[derive(Args)]
pub struct OutputArgs {
    /// output file (default: stdout)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state energies, with optional eigensolver cross-check
    Spectrum(spectrum::SpectrumArgs),
    /// Classical orbit: closed form vs geodesic integration
    Trajectory(trajectory::TrajectoryArgs),
    /// Sampled normalized bound-state wavefunction
    Wavefunction(wavefunction::WavefunctionArgs),
    /// Run invariant verification suites
    Verify(checks::VerifyArgs),
    /// Scan energies over λ or the mass ratio m/ω
    Scan(scan::ScanArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => spectrum::run(args),
        Command::Trajectory(args) => trajectory::run(args),
        Command::Wavefunction(args) => wavefunction::run(args),
        Command::Verify(args) => checks::run(args),
        Command::Scan(args) => scan::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(3)
        }
    }
}
