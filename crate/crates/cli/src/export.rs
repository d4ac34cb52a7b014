//! Tabular exporters: CSV and JSON-lines with round-trip float formatting.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! parsing a file back yields bit-identical values and identical runs
//! produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex;

use qcnms_core::oscillator::ComplexSeries;
use qcnms_core::spectrum::SpectrumResult;

use crate::config::OutputFormat;
use crate::RunError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |e| RunError::Io {
        path: path.to_path_buf(),
        detail: e.to_string(),
    }
}

/// Write one table; `columns` and each row must have equal length.
pub fn write_table(
    path: &Path,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
    format: OutputFormat,
) -> Result<(), RunError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Csv => {
            writeln!(w, "{}", columns.join(",")).map_err(io_err(path))?;
            for row in rows {
                debug_assert_eq!(row.len(), columns.len());
                let line = row
                    .iter()
                    .map(|v| format!("{v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                writeln!(w, "{line}").map_err(io_err(path))?;
            }
        }
        OutputFormat::Jsonl => {
            for row in rows {
                debug_assert_eq!(row.len(), columns.len());
                let obj: serde_json::Map<String, serde_json::Value> = columns
                    .iter()
                    .zip(&row)
                    .map(|(c, v)| ((*c).to_string(), serde_json::json!(v)))
                    .collect();
                serde_json::to_writer(&mut w, &obj).map_err(|e| RunError::Io {
                    path: path.to_path_buf(),
                    detail: e.to_string(),
                })?;
                writeln!(w).map_err(io_err(path))?;
            }
        }
    }
    w.flush().map_err(io_err(path))
}

/// File extension for a format.
pub fn extension(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Jsonl => "jsonl",
    }
}

/// `(tau, re, im)` export of a complex trajectory.
pub fn export_series(
    path: &Path,
    series: &ComplexSeries<f64>,
    format: OutputFormat,
) -> Result<(), RunError> {
    let rows = series
        .grid()
        .times()
        .zip(series.values())
        .map(|(t, v)| vec![t, v.re, v.im]);
    write_table(path, &["tau", "re", "im"], rows, format)
}

/// `(tau, x, p)` export of the phase-space projection.
pub fn export_phase_space(
    path: &Path,
    series: &ComplexSeries<f64>,
    format: OutputFormat,
) -> Result<(), RunError> {
    let (x, p) = qcnms_core::oscillator::to_phase_space(series);
    let rows = series
        .grid()
        .times()
        .zip(x)
        .zip(p)
        .map(|((t, xv), pv)| vec![t, xv, pv]);
    write_table(path, &["tau", "x", "p"], rows, format)
}

/// Two-column `(nu, magnitude)` spectrum export.
pub fn export_spectrum_magnitude(
    path: &Path,
    spec: &SpectrumResult<f64>,
    format: OutputFormat,
) -> Result<(), RunError> {
    let rows = spec
        .freqs()
        .iter()
        .zip(spec.amplitudes())
        .map(|(nu, a)| vec![*nu, a.norm()]);
    write_table(path, &["nu", "magnitude"], rows, format)
}

/// Three-column `(nu, re, im)` spectrum export.
pub fn export_spectrum_complex(
    path: &Path,
    spec: &SpectrumResult<f64>,
    format: OutputFormat,
) -> Result<(), RunError> {
    let rows = spec
        .freqs()
        .iter()
        .zip(spec.amplitudes())
        .map(|(nu, a)| vec![*nu, a.re, a.im]);
    write_table(path, &["nu", "re", "im"], rows, format)
}

/// Parse a CSV written by [`write_table`] back into rows.
pub fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|f| f.parse::<f64>().expect("numeric field"))
                .collect()
        })
        .collect()
}

/// Build the output path `{dir}/{prefix}_{stem}.{ext}`.
pub fn output_path(dir: &Path, prefix: &str, stem: &str, format: OutputFormat) -> PathBuf {
    dir.join(format!("{prefix}_{stem}.{}", extension(format)))
}

/// Convenience for exporting a raw complex sequence reused by scenarios.
pub fn series_from_values(
    grid: qcnms_core::TimeGrid64,
    values: Vec<Complex<f64>>,
) -> ComplexSeries<f64> {
    ComplexSeries::new(grid, values).expect("values built from the same grid")
}
