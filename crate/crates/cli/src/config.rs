use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ecpp::planner::{PlannerOptions, SmoothingOptions};
use ecpp::tracking::{ControllerGains, TrackingOptions};
use ecpp::{generate_boundary, Boundary, BoundaryKind, Method, RobotSpec};
use serde::{Deserialize, Serialize};

/// One experiment: a boundary, a robot, and the planners to run on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Analytic boundary, sampled at `resolution` over `span`.
    #[serde(default)]
    pub boundary: Option<BoundaryKind>,
    /// `x,y` CSV file, relative to the config file. Exclusive with `boundary`.
    #[serde(default)]
    pub boundary_csv: Option<PathBuf>,
    /// Length of the analytic boundary in meters.
    #[serde(default = "default_span")]
    pub span: f64,
    pub robot: RobotConfig,
    pub resolution: f64,
    pub planners: Vec<Method>,
    #[serde(default = "yes")]
    pub smoothing: bool,
    #[serde(default)]
    pub smoothing_options: SmoothingOptions,
    #[serde(default)]
    pub planner_options: PlannerOptions,
    /// Collision tolerance in meters.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub tracking: TrackingConfig,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotConfig {
    pub length: f64,
    pub width: f64,
    pub mow_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackingConfig {
    pub enabled: bool,
    pub gains: ControllerGains,
    pub options: TrackingOptions,
    /// Start this far to the left of the first path pose, in meters.
    pub lateral_offset: f64,
}

fn default_span() -> f64 {
    12.0
}

fn default_tolerance() -> f64 {
    ecpp::sweep::DEFAULT_TOLERANCE
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text).context("malformed config")?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut config = Self::from_json(&text)?;
        if let (Some(csv), Some(dir)) = (&config.boundary_csv, path.parent()) {
            if csv.is_relative() {
                config.boundary_csv = Some(dir.join(csv));
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            bail!("resolution must be positive, got {}", self.resolution);
        }
        if self.planners.is_empty() {
            bail!("planners must name at least one of big, small, mow, bsdp, scp");
        }
        let mut seen = self.planners.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.planners.len() {
            bail!("planners must not repeat");
        }
        match (&self.boundary, &self.boundary_csv) {
            (Some(_), Some(_)) => bail!("give either boundary or boundary_csv, not both"),
            (None, None) => bail!("missing boundary or boundary_csv"),
            _ => {}
        }
        if !(self.span > 0.0 && self.span.is_finite()) {
            bail!("span must be positive, got {}", self.span);
        }
        if !(self.tolerance >= 0.0) {
            bail!("tolerance must be non-negative");
        }
        self.robot_spec()?;
        if self.tracking.enabled {
            self.tracking.gains.validate()?;
        }
        Ok(())
    }

    pub fn robot_spec(&self) -> Result<RobotSpec> {
        let r = self.robot;
        Ok(RobotSpec::new(r.length, r.width, r.mow_radius)?)
    }

    /// Raw boundary, sampled on the resolution lattice.
    pub fn load_boundary(&self) -> Result<Boundary> {
        match (&self.boundary, &self.boundary_csv) {
            (Some(kind), _) => Ok(generate_boundary(kind, self.span, self.resolution)?),
            (None, Some(path)) => {
                let file = std::fs::File::open(path)
                    .with_context(|| format!("cannot open boundary {}", path.display()))?;
                let b = ecpp::io::read_boundary_csv(file)
                    .with_context(|| format!("bad boundary file {}", path.display()))?;
                Ok(b.resample(self.resolution)?)
            }
            (None, None) => bail!("missing boundary"),
        }
    }
}
