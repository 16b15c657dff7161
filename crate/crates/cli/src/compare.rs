use std::fmt::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ecpp::{CoverageReport, Method};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub method: Method,
    pub uncut_area: f64,
    /// `100 * (big - uncut) / big`; `None` without a big-disk baseline.
    pub reduction_percent: Option<f64>,
}

/// Percentage reduction of `uncut` against the big-disk `baseline`.
pub fn reduction_percent(baseline: f64, uncut: f64) -> f64 {
    100.0 * (baseline - uncut) / baseline
}

/// Rows in input order. Reports carrying boundary digests must agree.
pub fn compare(reports: &[CoverageReport]) -> Result<Vec<ComparisonRow>> {
    if reports.len() < 2 {
        bail!("compare needs at least two reports, got {}", reports.len());
    }
    let digests: Vec<&str> = reports
        .iter()
        .filter_map(|r| r.boundary_digest.as_deref())
        .collect();
    if digests.windows(2).any(|w| w[0] != w[1]) {
        bail!("reports come from different boundaries");
    }
    let baseline = reports
        .iter()
        .find(|r| r.method == Method::Big)
        .map(|r| r.uncut_area)
        .filter(|&b| b > 0.0);
    Ok(reports
        .iter()
        .map(|r| ComparisonRow {
            method: r.method,
            uncut_area: r.uncut_area,
            reduction_percent: baseline.map(|b| reduction_percent(b, r.uncut_area)),
        })
        .collect())
}

pub fn format_table(rows: &[ComparisonRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{:<8} {:>14} {:>14}", "method", "uncut [m^2]", "vs big [%]").unwrap();
    for r in rows {
        let pct = r
            .reduction_percent
            .map_or_else(|| "-".to_string(), |p| format!("{p:.2}"));
        writeln!(out, "{:<8} {:>14.4} {:>14}", r.method, r.uncut_area, pct).unwrap();
    }
    out
}

pub fn load_reports(paths: &[impl AsRef<Path>]) -> Result<Vec<CoverageReport>> {
    paths
        .iter()
        .map(|p| {
            let p = p.as_ref();
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read report {}", p.display()))?;
            CoverageReport::from_json(&text).with_context(|| format!("bad report {}", p.display()))
        })
        .collect()
}
