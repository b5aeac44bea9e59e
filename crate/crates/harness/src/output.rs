//! CSV rows and writers. Numbers use Rust's locale-independent shortest
//! round-trip formatting; missing values are empty fields.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// One iteration of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub k: usize,
    /// 1 for an objective step, 0 for a constraint step.
    pub branch: u8,
    pub gamma_k: f64,
    pub eta_k: f64,
    pub sampled_value: f64,
    pub f_xk: f64,
    #[serde(rename = "oracle_G_xk")]
    pub oracle_g_xk: Option<f64>,
    pub f_xbar_running: Option<f64>,
    #[serde(rename = "oracle_G_xbar_running")]
    pub oracle_g_xbar_running: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub seed: u64,
    /// `ok`, `empty_b` or `error`.
    pub status: &'static str,
    pub f_xbar: Option<f64>,
    #[serde(rename = "oracle_G_xbar")]
    pub oracle_g_xbar: Option<f64>,
    pub b_size: usize,
    pub kappa_clamped: usize,
    pub sample_size_clamped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub method: String,
    pub seeds: usize,
    pub failed_seeds: usize,
    pub mean_f_xbar: f64,
    pub relative_gap: f64,
    pub optimal_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatesRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub seeds: usize,
    pub failed_seeds: usize,
    pub mean_gap: f64,
    pub se_gap: f64,
    pub mean_violation: f64,
    pub se_violation: f64,
    pub gap_bound: f64,
    pub violation_bound: f64,
    pub mean_b_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub mh_iterations: usize,
    pub seeds: usize,
    pub failed_seeds: usize,
    pub mean_f_xbar: f64,
    pub relative_gap: f64,
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
