//! CSV and JSON writers for approximants, traces and error curves.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dictionary::{AtomKind, TargetFunction};
use crate::error::{Error, Result};
use crate::eval::ErrorReport;
use crate::nnls::NnlsTrace;
use crate::scalar::Scalar;
use crate::selector::SparseApproximant;

/// `%.6e` layout with a signed two-digit exponent, e.g. `1.263660e-04`.
pub fn format_sci(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let raw = format!("{value:.6e}");
    let (mantissa, exp) = raw.split_once('e').expect("exponent present in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// `i,u,v` rows, one per term, ascending `v`.
pub fn params_csv<T: Scalar>(approx: &SparseApproximant<T>) -> String {
    let mut out = String::from("i,u,v\n");
    for (i, t) in approx.terms().iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i + 1, format_sci(t.u.to_f64_lossy()), format_sci(t.v.to_f64_lossy()));
    }
    out
}

/// `iter,residual_norm,support_size`.
pub fn trace_csv<T: Scalar>(trace: &NnlsTrace<T>) -> String {
    let mut out = String::from("iter,residual_norm,support_size\n");
    for r in trace.records() {
        let _ = writeln!(out, "{},{},{}", r.iter, format_sci(r.residual_norm.to_f64_lossy()), r.support_size);
    }
    out
}

/// Full coefficient snapshots: `iter,u_1,...,u_l`, round-trip precision.
pub fn trace_coefficients_csv<T: Scalar>(trace: &NnlsTrace<T>) -> String {
    let mut out = String::new();
    let l = trace.records().first().map_or(0, |r| r.coefficients.len());
    out.push_str("iter");
    for k in 1..=l {
        let _ = write!(out, ",u_{k}");
    }
    out.push('\n');
    for r in trace.records() {
        let _ = write!(out, "{}", r.iter);
        for c in &r.coefficients {
            let _ = write!(out, ",{:e}", c.to_f64_lossy());
        }
        out.push('\n');
    }
    out
}

/// `x,epsilon`.
pub fn error_curve_csv<T: Scalar>(report: &ErrorReport<T>) -> String {
    let mut out = String::from("x,epsilon\n");
    for (x, e) in report.nodes.iter().zip(&report.epsilon) {
        let _ = writeln!(out, "{},{}", format_sci(x.to_f64_lossy()), format_sci(e.to_f64_lossy()));
    }
    out
}

/// JSON form of an approximant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximantRecord {
    pub family: AtomKind,
    pub alpha: Option<f64>,
    pub pin_value: f64,
    /// `(u, v)` pairs, ascending `v`.
    pub terms: Vec<(f64, f64)>,
    pub selected_iter: Option<usize>,
    pub residual_norm: Option<f64>,
}

impl ApproximantRecord {
    pub fn new<T: Scalar>(approx: &SparseApproximant<T>, target: &TargetFunction<T>) -> Self {
        ApproximantRecord {
            family: approx.family().kind(),
            alpha: target.alpha().map(Scalar::to_f64_lossy),
            pin_value: approx.pin_value().to_f64_lossy(),
            terms: approx.terms().iter().map(|t| (t.u.to_f64_lossy(), t.v.to_f64_lossy())).collect(),
            selected_iter: approx.selected_iter(),
            residual_norm: approx.residual_norm().map(Scalar::to_f64_lossy),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidInput(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
