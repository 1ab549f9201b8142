//! Distance-record CSV files, plot-ready figure data, and run summaries.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! repeated run over the same inputs reproduces every file byte for byte.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qmslab_core::{DistanceRecord, SlopeFit};
use serde::Serialize;

pub const RECORDS_HEADER: &str = "system_a,system_b,time,d_psi,d_n,convention,n_electrons";

/// Stable order for record files: pair, then time (static records first),
/// then convention label.
pub fn sort_records(records: &mut [DistanceRecord]) {
    records.sort_by(|a, b| {
        (a.system_a, a.system_b)
            .cmp(&(b.system_a, b.system_b))
            .then_with(|| match (a.time, b.time) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => x.total_cmp(&y),
            })
            .then_with(|| a.convention.label().cmp(b.convention.label()))
    });
}

pub fn render_records(records: &[DistanceRecord]) -> String {
    let mut out = String::with_capacity(RECORDS_HEADER.len() + 1 + records.len() * 64);
    out.push_str(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        let time = r.time.map(|t| t.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.system_a,
            r.system_b,
            time,
            r.d_psi,
            r.d_n,
            r.convention.label(),
            r.convention.electron_number()
        );
    }
    out
}

pub fn write_records(path: &Path, records: &[DistanceRecord]) -> Result<()> {
    fs::write(path, render_records(records)).with_context(|| format!("writing {}", path.display()))
}

/// A point pulled back out of a records or figure-data CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub d_psi: f64,
    pub d_n: f64,
    pub convention: Option<String>,
}

/// Parse either CSV layout this crate writes: the full record format
/// (sniffed by its `system_a` first column) or the slim figure data whose
/// first column is `d_psi`.
pub fn read_plot_points(text: &str, label: &str) -> Result<Vec<PlotPoint>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = match lines.next() {
        Some(h) => h,
        None => bail!("{label}: empty file, expected a CSV header"),
    };
    let columns: Vec<&str> = header.trim_end().split(',').collect();
    let (psi_col, n_col, convention_col) = match columns.first() {
        Some(&"system_a") => {
            if columns != RECORDS_HEADER.split(',').collect::<Vec<_>>() {
                bail!("{label}: header does not match `{RECORDS_HEADER}`");
            }
            (3, 4, Some(5))
        }
        Some(&"d_psi") => {
            let n_col = columns
                .iter()
                .position(|c| *c == "d_n")
                .ok_or_else(|| anyhow::anyhow!("{label}: figure data header lacks a d_n column"))?;
            (0, n_col, None)
        }
        _ => bail!("{label}: unrecognized CSV header `{header}`"),
    };
    let mut points = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            bail!(
                "{label}:{}: expected {} fields, found {}",
                i + 1,
                columns.len(),
                fields.len()
            );
        }
        let parse = |col: usize| -> Result<f64> {
            fields[col]
                .parse::<f64>()
                .with_context(|| format!("{label}:{}: bad number `{}`", i + 1, fields[col]))
        };
        points.push(PlotPoint {
            d_psi: parse(psi_col)?,
            d_n: parse(n_col)?,
            convention: convention_col.map(|c| fields[c].to_string()),
        });
    }
    Ok(points)
}

/// Figure data for the static family figures: one row per pair, a single
/// convention.
pub fn render_figure_pairs(records: &[DistanceRecord]) -> String {
    let mut out = String::from("d_psi,d_n,system_a,system_b\n");
    for r in records {
        let _ = writeln!(out, "{},{},{},{}", r.d_psi, r.d_n, r.system_a, r.system_b);
    }
    out
}

/// Figure data for the dynamics figure: ground-state pairs then trail
/// snapshots, a single convention.
pub fn render_figure_trails(
    static_records: &[DistanceRecord],
    trail_records: &[DistanceRecord],
) -> String {
    let mut out = String::from("d_psi,d_n,series,system_a,system_b,time\n");
    for r in static_records {
        let _ = writeln!(
            out,
            "{},{},ground,{},{},",
            r.d_psi, r.d_n, r.system_a, r.system_b
        );
    }
    for r in trail_records {
        let time = r.time.map(|t| t.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},trail,{},{},{}",
            r.d_psi, r.d_n, r.system_a, r.system_b, time
        );
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeSummary {
    pub slope: f64,
    pub rms_residual: f64,
    pub max_abs_residual: f64,
    pub max_relative_deviation: f64,
    pub max_d_psi: f64,
    pub max_d_n: f64,
    pub record_count: usize,
}

impl From<&SlopeFit> for SlopeSummary {
    fn from(fit: &SlopeFit) -> Self {
        Self {
            slope: fit.slope,
            rms_residual: fit.rms_residual,
            max_abs_residual: fit.max_abs_residual,
            max_relative_deviation: fit.max_relative_deviation,
            max_d_psi: fit.max_d_psi,
            max_d_n: fit.max_d_n,
            record_count: fit.count,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicsSummary {
    pub reference: u32,
    pub below_line_fraction: f64,
    pub time_averaged_ratio: f64,
    pub upper_triangle_count: usize,
    pub upper_tolerance: f64,
    pub trail_record_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub experiment: String,
    pub family: String,
    pub kind: String,
    pub figure_convention: String,
    pub natural: SlopeSummary,
    pub unit: SlopeSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSummary>,
}

pub fn write_summary(path: &Path, summary: &ExperimentSummary) -> Result<()> {
    let mut text = serde_json::to_string_pretty(summary).context("serializing summary")?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
