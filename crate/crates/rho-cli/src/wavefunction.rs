use std::io::Write;

use clap::Args;
use rho_core::classical::amplitude;
use rho_core::numeric::{node_count, normalize, GridSpec};
use rho_core::quantum::energy_level;

use crate::output::{fmt_f64, open_sink, Format};
use crate::{AppError, CmdResult, ModelArgs, OutputArgs};

#[derive(Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// principal quantum number (λ > 0 requires n ≤ n_max)
    #[arg(long)]
    n: u32,
    /// number of sample points
    #[arg(long, default_value_t = 513)]
    grid: usize,
    /// half-width of the sampled window for λ ≥ 0 (default: automatic)
    #[arg(long)]
    window: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

pub fn run(args: WavefunctionArgs) -> CmdResult {
    if args.grid < 8 {
        return Err(AppError::Usage("--grid must be at least 8".into()));
    }
    let params = args.model.build()?;
    let level = energy_level(&params, args.n)?;
    let quad_grid = GridSpec::default();
    let normalized = normalize(&params, &level, &quad_grid)?;
    let nodes = node_count(
        &params,
        &level,
        &GridSpec::new(args.grid.max(64).max(8 * (args.n as usize + 1)), args.window),
    )?;

    // sample the compactified angle for λ < 0 (uniform θ resolves the
    // horizon-hugging tails); a uniform window otherwise
    let xs: Vec<f64> = if params.lambda() < 0.0 {
        let r = params.horizon_radius();
        let h = std::f64::consts::PI / (args.grid as f64 + 1.0);
        (1..=args.grid)
            .map(|j| r * (-std::f64::consts::FRAC_PI_2 + j as f64 * h).sin())
            .collect()
    } else {
        let window = args.window.unwrap_or_else(|| {
            let base = 8.0 / (params.mass() * params.omega()).sqrt();
            base + 1.5 * amplitude(&params, level.energy).unwrap_or(0.0)
        });
        let h = 2.0 * window / (args.grid as f64 + 1.0);
        (1..=args.grid).map(|j| -window + j as f64 * h).collect()
    };

    let mut sink = open_sink(args.out.output.as_deref())?;
    match args.format {
        Format::Csv => {
            writeln!(sink, "# lambda={}", fmt_f64(args.model.lambda))?;
            writeln!(sink, "# omega={}", fmt_f64(args.model.omega))?;
            writeln!(sink, "# mass={}", fmt_f64(args.model.mass))?;
            writeln!(sink, "# n={}", args.n)?;
            writeln!(sink, "# E={}", fmt_f64(level.energy))?;
            writeln!(sink, "# norm_constant={}", fmt_f64(normalized.norm_constant))?;
            writeln!(sink, "# nodes={nodes}")?;
            writeln!(sink, "x,U_normalized")?;
            for &x in &xs {
                writeln!(sink, "{},{}", fmt_f64(x), fmt_f64(normalized.value(x)?))?;
            }
        }
        Format::Json => {
            let mut s = String::from("{");
            s.push_str(&format!("\"lambda\":{},", fmt_f64(args.model.lambda)));
            s.push_str(&format!("\"omega\":{},", fmt_f64(args.model.omega)));
            s.push_str(&format!("\"mass\":{},", fmt_f64(args.model.mass)));
            s.push_str(&format!("\"n\":{},", args.n));
            s.push_str(&format!("\"E\":{},", fmt_f64(level.energy)));
            s.push_str(&format!(
                "\"norm_constant\":{},",
                fmt_f64(normalized.norm_constant)
            ));
            s.push_str(&format!("\"nodes\":{nodes},"));
            s.push_str("\"samples\":[");
            for (i, &x) in xs.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&format!(
                    "{{\"x\":{},\"u\":{}}}",
                    fmt_f64(x),
                    fmt_f64(normalized.value(x)?)
                ));
            }
            s.push_str("]}");
            writeln!(sink, "{s}")?;
        }
    }
    sink.flush().map_err(AppError::from)
}
