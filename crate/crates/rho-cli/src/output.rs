//! Deterministic output plumbing: every float is printed with 15 significant
//! digits so runs are byte-identical and values round-trip cleanly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

/// JSON value position: a number or null.
pub fn fmt_json_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => "null".to_string(),
    }
}

/// CSV cell: empty when absent.
pub fn fmt_csv_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => String::new(),
    }
}

pub fn open_sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}
