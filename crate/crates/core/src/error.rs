use thiserror::Error;

/// Errors produced by the planning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    #[error("invalid robot spec: {0}")]
    InvalidRobot(String),

    #[error("boundary step {step} is not a whole multiple of resolution {resolution}")]
    ResolutionMismatch { step: f64, resolution: f64 },

    #[error("closed obstacle is not a function graph at column {column}")]
    NonFunctionEnvelope { column: usize },

    #[error("no obstacle cell in column {column}")]
    EmptyColumn { column: usize },

    #[error("disk radius {radius} m is smaller than one cell ({resolution} m)")]
    RadiusTooSmall { radius: f64, resolution: f64 },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("smoothing window {window} exceeds sample count {samples}")]
    WindowTooLarge { window: usize, samples: usize },

    #[error("pose at x = {x} lies outside the boundary span")]
    PathOutsideGrid { x: f64 },

    #[error("path at x = {x} (y = {path_y}) is not below the boundary (y = {boundary_y})")]
    PathAboveBoundary { x: f64, path_y: f64, boundary_y: f64 },

    #[error("invalid controller gains: {0}")]
    InvalidGains(String),

    #[error("tracking diverged at t = {time:.3} s: cross-track error {error:.3} m")]
    Diverged { time: f64, error: f64 },

    #[error("tracking did not reach the path end within {steps} steps")]
    NotConverged { steps: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
