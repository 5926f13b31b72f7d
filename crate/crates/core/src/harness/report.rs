//! Report records and their JSON / CSV renderings.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{LabError, Result};

use super::config::Format;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub case: String,
    pub anchor: String,
    pub convention: String,
    pub inputs: Value,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
    pub details: Value,
}

/// Declaration order fixes the key order; non-finite reals render as `null`.
pub fn render_json(reports: &[VerificationReport]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(reports).map_err(|e| LabError::usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn render_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| LabError::usage(format!("csv: {e}"));
    w.write_record(["suite", "case", "anchor", "measured", "bound", "tolerance", "pass", "seconds"])
        .map_err(io)?;
    for r in reports {
        w.write_record([
            r.suite.clone(),
            r.case.clone(),
            r.anchor.clone(),
            csv_real(r.measured),
            csv_real(r.bound),
            csv_real(r.tolerance),
            r.pass.to_string(),
            csv_real(r.seconds),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::usage(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| LabError::usage(e.to_string()))
}

pub fn render(reports: &[VerificationReport], format: Format) -> Result<String> {
    match format {
        Format::Json => render_json(reports),
        Format::Csv => render_csv(reports),
    }
}

/// Writes to `path`, or to stdout when none is given.
pub fn emit_report(reports: &[VerificationReport], format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(reports, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| LabError::usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| LabError::usage(format!("cannot write report: {e}"))),
    }
}
