use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular mowing robot with a circular deck centered on the body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    length: f64,
    width: f64,
    mow_radius: f64,
}

impl RobotSpec {
    pub fn new(length: f64, width: f64, mow_radius: f64) -> Result<Self> {
        let finite = length.is_finite() && width.is_finite() && mow_radius.is_finite();
        if !finite || length <= 0.0 || width <= 0.0 {
            return Err(Error::InvalidRobot(format!(
                "length and width must be positive, got l = {length}, w = {width}"
            )));
        }
        if !(mow_radius > 0.0 && mow_radius <= width / 2.0) {
            return Err(Error::InvalidRobot(format!(
                "mowing radius must lie in (0, w/2 = {}], got {mow_radius}",
                width / 2.0
            )));
        }
        Ok(Self {
            length,
            width,
            mow_radius,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Circumcircle radius of the body, `sqrt((l/2)² + (w/2)²)`.
    pub fn big_radius(&self) -> f64 {
        (self.length / 2.0).hypot(self.width / 2.0)
    }

    /// Inscribed circle radius, `w/2`.
    pub fn small_radius(&self) -> f64 {
        self.width / 2.0
    }

    pub fn mow_radius(&self) -> f64 {
        self.mow_radius
    }
}
