use std::io::Write;

use clap::{Args, ValueEnum};
use rho_core::quantum::energy_level;
use rho_core::ModelParameters;

use crate::output::{fmt_csv_opt, fmt_f64, fmt_json_opt, open_sink, Format};
use crate::{AppError, CmdResult, OutputArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanParameter {
    Lambda,
    MassRatio,
}

#[derive(Args)]
pub struct ScanArgs {
    /// which quantity the scan varies
    #[arg(long, value_enum)]
    param: ScanParameter,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    /// number of scan points (1 reproduces a single spectrum row)
    #[arg(long, default_value_t = 21)]
    steps: usize,
    /// geometric instead of linear spacing (endpoints must be positive)
    #[arg(long)]
    log: bool,
    /// comma-separated list of principal quantum numbers
    #[arg(long, value_delimiter = ',', default_value = "0")]
    n: Vec<u32>,
    /// fixed λ for mass-ratio scans
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// frequency scale ω
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// fixed mass for λ scans
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

struct ScanPoint {
    lambda: f64,
    omega: f64,
    mass: f64,
    energies: Vec<Option<f64>>,
}

fn scan_values(args: &ScanArgs) -> Result<Vec<f64>, AppError> {
    if args.steps == 0 {
        return Err(AppError::Usage("--steps must be at least 1".into()));
    }
    if args.steps == 1 {
        return Ok(vec![args.from]);
    }
    if args.log {
        if args.from <= 0.0 || args.to <= 0.0 {
            return Err(AppError::Usage(
                "--log requires positive --from and --to".into(),
            ));
        }
        let ratio = (args.to / args.from).ln() / (args.steps as f64 - 1.0);
        return Ok((0..args.steps)
            .map(|i| args.from * (ratio * i as f64).exp())
            .collect());
    }
    let step = (args.to - args.from) / (args.steps as f64 - 1.0);
    Ok((0..args.steps)
        .map(|i| args.from + step * i as f64)
        .collect())
}

fn evaluate(args: &ScanArgs, value: f64) -> Result<ScanPoint, AppError> {
    let (lambda, omega, mass) = match args.param {
        ScanParameter::Lambda => (value, args.omega, args.mass.unwrap_or(1.0)),
        ScanParameter::MassRatio => {
            let lambda = args.lambda.ok_or_else(|| {
                AppError::Usage("mass-ratio scans need a fixed --lambda".into())
            })?;
            (lambda, args.omega, value * args.omega)
        }
    };
    let params = ModelParameters::new(lambda, omega, mass)?;
    let energies = args
        .n
        .iter()
        .map(|&n| energy_level(&params, n).ok().map(|l| l.energy))
        .collect();
    Ok(ScanPoint {
        lambda,
        omega,
        mass,
        energies,
    })
}

pub fn run(args: ScanArgs) -> CmdResult {
    if args.n.is_empty() {
        return Err(AppError::Usage("--n needs at least one level".into()));
    }
    let values = scan_values(&args)?;

    // scan points evaluate in parallel (capped by RHO_NUM_THREADS) but are
    // collected in input order, keeping the output byte-deterministic
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Ok(threads) = std::env::var("RHO_NUM_THREADS") {
            let threads: usize = threads
                .parse()
                .map_err(|_| AppError::Usage("RHO_NUM_THREADS must be a positive integer".into()))?;
            builder = builder.num_threads(threads.max(1));
        }
        builder
            .build()
            .map_err(|e| AppError::Usage(format!("thread pool: {e}")))?
    };
    let points: Vec<Result<ScanPoint, AppError>> = pool.install(|| {
        use rayon::prelude::*;
        values.par_iter().map(|&v| evaluate(&args, v)).collect()
    });
    let points: Vec<ScanPoint> = points.into_iter().collect::<Result<_, _>>()?;

    let mut sink = open_sink(args.out.output.as_deref())?;
    match args.format {
        Format::Csv => {
            writeln!(
                sink,
                "# param={}",
                match args.param {
                    ScanParameter::Lambda => "lambda",
                    ScanParameter::MassRatio => "mass-ratio",
                }
            )?;
            writeln!(sink, "lambda,omega,mass,n,E")?;
            for point in &points {
                for (&n, &energy) in args.n.iter().zip(&point.energies) {
                    writeln!(
                        sink,
                        "{},{},{},{n},{}",
                        fmt_f64(point.lambda),
                        fmt_f64(point.omega),
                        fmt_f64(point.mass),
                        fmt_csv_opt(energy)
                    )?;
                }
            }
        }
        Format::Json => {
            let mut s = String::from("{");
            s.push_str(&format!(
                "\"parameter\":\"{}\",",
                match args.param {
                    ScanParameter::Lambda => "lambda",
                    ScanParameter::MassRatio => "mass-ratio",
                }
            ));
            s.push_str("\"points\":[");
            for (i, point) in points.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&format!(
                    "{{\"lambda\":{},\"omega\":{},\"mass\":{},\"levels\":[",
                    fmt_f64(point.lambda),
                    fmt_f64(point.omega),
                    fmt_f64(point.mass)
                ));
                for (j, (&n, &energy)) in args.n.iter().zip(&point.energies).enumerate() {
                    if j > 0 {
                        s.push(',');
                    }
                    s.push_str(&format!("{{\"n\":{n},\"E\":{}}}", fmt_json_opt(energy)));
                }
                s.push_str("]}");
            }
            s.push_str("]}");
            writeln!(sink, "{s}")?;
        }
    }
    sink.flush().map_err(AppError::from)
}
