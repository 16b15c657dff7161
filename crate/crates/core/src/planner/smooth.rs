use serde::{Deserialize, Serialize};

use super::{headings, PlannedPath, Pose};
use crate::error::{Error, Result};
use crate::spline::{fit_to_rms, smoothing_spline};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmoothingOptions {
    /// Residual RMS budget for the spline fit, in cells.
    pub target_rms_cells: f64,
    /// A smoothed sample more than this many cells above the raw path is
    /// reset to the raw value.
    pub clamp_slack_cells: f64,
}

impl Default for SmoothingOptions {
    fn default() -> Self {
        Self {
            target_rms_cells: 2.0,
            clamp_slack_cells: 1.0,
        }
    }
}

/// Smoothing-spline pass with the default options.
pub fn smooth_path(path: &PlannedPath, resolution: f64) -> Result<PlannedPath> {
    smooth_path_with(path, resolution, &SmoothingOptions::default())
}

/// Fits a cubic smoothing spline through the path centers and keeps it from
/// rising above the raw path.
///
/// The smoothing weight is the largest whose fit stays within the RMS budget.
/// Where the fit rises more than the slack above the raw path, the fit target
/// is lowered by the excess and the spline refit at the same weight, so the
/// result stays smooth instead of snapping back to the raw staircase. Any
/// sample still above the slack afterwards is reset to the raw value.
pub fn smooth_path_with(
    path: &PlannedPath,
    resolution: f64,
    options: &SmoothingOptions,
) -> Result<PlannedPath> {
    const REFITS: usize = 200;
    if path.len() < 4 {
        return Err(Error::TooFewSamples {
            needed: 4,
            got: path.len(),
        });
    }
    let xs = path.xs();
    let raw = path.ys();
    let (alpha, mut fit) = fit_to_rms(&xs, &raw, options.target_rms_cells * resolution)?;
    let slack = options.clamp_slack_cells * resolution;
    let mut target = raw.clone();
    for _ in 0..REFITS {
        let mut lowered = false;
        for ((t, &s), &r) in target.iter_mut().zip(&fit).zip(&raw) {
            if s > r + slack {
                *t -= s - r;
                lowered = true;
            }
        }
        if !lowered {
            break;
        }
        fit = smoothing_spline(&xs, &target, alpha)?;
    }
    let ys: Vec<f64> = fit
        .iter()
        .zip(&raw)
        .map(|(&s, &r)| if s > r + slack { r } else { s })
        .collect();
    let poses = xs
        .iter()
        .zip(&ys)
        .zip(headings(&xs, &ys))
        .map(|((&x, &y), heading)| Pose { x, y, heading })
        .collect();
    Ok(PlannedPath {
        poses,
        method: path.method,
        smoothed: true,
        diagnostics: path.diagnostics.clone(),
    })
}
