use std::io::Write;

use clap::Args;
use rho_core::numeric::{sturm_liouville_eigen, GridSpec};
use rho_core::quantum::{discrete_spectrum, QuantumLevel};

use crate::output::{fmt_csv_opt, fmt_f64, fmt_json_opt, open_sink, Format};
use crate::{AppError, CmdResult, ModelArgs, OutputArgs};

#[derive(Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// number of levels (λ > 0 spectra are finite and never exceed n_max+1)
    #[arg(long, default_value_t = 5)]
    levels: usize,
    /// cross-check each level against the finite-difference eigensolver
    #[arg(long)]
    verify: bool,
    /// relative tolerance for --verify; disagreement beyond it exits with 3
    #[arg(long, default_value_t = 1e-5)]
    tolerance: f64,
    /// interior grid points for the eigensolver (default: automatic)
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

struct Row {
    level: QuantumLevel,
    numeric: Option<f64>,
}

pub fn run(args: SpectrumArgs) -> CmdResult {
    if args.levels == 0 {
        return Err(AppError::Usage("--levels must be at least 1".into()));
    }
    let params = args.model.build()?;
    let spectrum = discrete_spectrum(&params, args.levels);
    let shown: Vec<&QuantumLevel> = spectrum.levels.iter().take(args.levels).collect();

    let numeric = if args.verify {
        let grid = match args.grid_points {
            Some(points) => GridSpec::new(points, None),
            None => GridSpec::recommended(&params, shown.len() as u32),
        };
        Some(sturm_liouville_eigen(&params, shown.len(), &grid)?)
    } else {
        None
    };

    let rows: Vec<Row> = shown
        .iter()
        .enumerate()
        .map(|(i, level)| Row {
            level: **level,
            numeric: numeric.as_ref().map(|n| n.energies[i]),
        })
        .collect();

    let mut sink = open_sink(args.out.output.as_deref())?;
    match args.format {
        Format::Json => write_json(&mut sink, &args, &spectrum, &rows)?,
        Format::Csv => write_csv(&mut sink, &args, &spectrum, &rows)?,
    }
    sink.flush().map_err(AppError::from)?;

    if let Some(numeric) = &numeric {
        let mut worst = 0.0_f64;
        for (row, got) in rows.iter().zip(&numeric.energies) {
            worst = worst.max(((got - row.level.energy) / row.level.energy).abs());
        }
        if worst > args.tolerance {
            return Err(AppError::Verification(format!(
                "eigensolver disagrees with the closed form: relative error {worst:.3e} exceeds {:.3e}",
                args.tolerance
            )));
        }
    }
    Ok(())
}

fn write_json(
    w: &mut dyn Write,
    args: &SpectrumArgs,
    spectrum: &rho_core::quantum::DiscreteSpectrum,
    rows: &[Row],
) -> CmdResult {
    let mut s = String::from("{");
    s.push_str(&format!("\"lambda\":{},", fmt_f64(args.model.lambda)));
    s.push_str(&format!("\"omega\":{},", fmt_f64(args.model.omega)));
    s.push_str(&format!("\"mass\":{},", fmt_f64(args.model.mass)));
    s.push_str(&format!("\"countable\":{},", spectrum.countable));
    if let Some(n_max) = spectrum.n_max {
        s.push_str(&format!("\"n_max\":{n_max},"));
    }
    if let Some(threshold) = spectrum.continuum_threshold {
        s.push_str(&format!("\"continuum_threshold\":{},", fmt_f64(threshold)));
    }
    if args.verify {
        s.push_str(&format!("\"verify_tolerance\":{},", fmt_f64(args.tolerance)));
    }
    s.push_str("\"levels\":[");
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push('{');
        s.push_str(&format!("\"n\":{},", row.level.n));
        s.push_str(&format!("\"s\":{},", fmt_f64(row.level.s)));
        s.push_str(&format!("\"nprime\":{},", row.level.nprime));
        s.push_str(&format!("\"p\":{},", fmt_json_opt(row.level.p)));
        s.push_str(&format!("\"E\":{}", fmt_f64(row.level.energy)));
        if let Some(numeric) = row.numeric {
            s.push_str(&format!(",\"E_numeric\":{}", fmt_f64(numeric)));
            s.push_str(&format!(
                ",\"abs_diff\":{}",
                fmt_f64((numeric - row.level.energy).abs())
            ));
        }
        s.push('}');
    }
    s.push_str("]}");
    writeln!(w, "{s}").map_err(AppError::from)
}

fn write_csv(
    w: &mut dyn Write,
    args: &SpectrumArgs,
    spectrum: &rho_core::quantum::DiscreteSpectrum,
    rows: &[Row],
) -> CmdResult {
    writeln!(w, "# lambda={}", fmt_f64(args.model.lambda))?;
    writeln!(w, "# omega={}", fmt_f64(args.model.omega))?;
    writeln!(w, "# mass={}", fmt_f64(args.model.mass))?;
    if let Some(n_max) = spectrum.n_max {
        writeln!(w, "# n_max={n_max}")?;
    }
    if let Some(threshold) = spectrum.continuum_threshold {
        writeln!(w, "# continuum_threshold={}", fmt_f64(threshold))?;
    }
    if args.verify {
        writeln!(w, "n,s,nprime,p,E,E_numeric,abs_diff")?;
    } else {
        writeln!(w, "n,s,nprime,p,E")?;
    }
    for row in rows {
        let base = format!(
            "{},{},{},{},{}",
            row.level.n,
            fmt_f64(row.level.s),
            row.level.nprime,
            fmt_csv_opt(row.level.p),
            fmt_f64(row.level.energy)
        );
        match row.numeric {
            Some(numeric) => writeln!(
                w,
                "{base},{},{}",
                fmt_f64(numeric),
                fmt_f64((numeric - row.level.energy).abs())
            )?,
            None => writeln!(w, "{base}")?,
        }
    }
    Ok(())
}
