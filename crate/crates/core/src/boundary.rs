//! Function-graph lawn boundaries `y = f(x)`.
//!
//! The obstacle is `{y >= f(x)}` and the lawn is `{y < f(x)}`. A raster cell
//! is obstacle iff its center satisfies that inequality. Beyond the sampled
//! span the boundary is continued by point reflection through the end sample,
//! which keeps it continuous with a continuous slope, so morphology near the
//! span ends does not see an artificial corner.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::BinaryGrid;
use crate::morphology::{dilate, erode, DiskSE};
use crate::robot::RobotSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Boundary {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidBoundary(format!(
                "{} x samples but {} y samples",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: xs.len(),
            });
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidBoundary("non-finite sample".into()));
        }
        if let Some(k) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidBoundary(format!(
                "x samples must be strictly increasing (index {})",
                k + 1
            )));
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn span(&self) -> f64 {
        self.x_max() - self.x_min()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Sample spacing when the samples are uniform (relative tolerance 1e-6).
    pub fn uniform_step(&self) -> Option<f64> {
        let step = self.span() / (self.len() - 1) as f64;
        let tol = 1e-6 * step;
        self.xs
            .windows(2)
            .all(|w| ((w[1] - w[0]) - step).abs() <= tol)
            .then_some(step)
    }

    /// Linear interpolation inside the span, clamped to the end values outside.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.xs.partition_point(|&v| v <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let t = (x - x0) / (x1 - x0);
        self.ys[k - 1] + t * (self.ys[k] - self.ys[k - 1])
    }

    /// Interpolation inside the span, point-reflected continuation outside.
    pub fn eval_extended(&self, x: f64) -> f64 {
        let (lo, hi) = (self.x_min(), self.x_max());
        let span = self.span();
        if x < lo {
            let t = (lo - x).min(span);
            2.0 * self.ys[0] - self.eval(lo + t)
        } else if x > hi {
            let t = (x - hi).min(span);
            2.0 * self.ys[self.len() - 1] - self.eval(hi - t)
        } else {
            self.eval(x)
        }
    }

    /// Hex SHA-256 over the little-endian bytes of every sample.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (x, y) in self.points() {
            h.update(x.to_le_bytes());
            h.update(y.to_le_bytes());
        }
        format!("{:x}", h.finalize())
    }

    /// Resamples onto `x_min + k * step` covering the span.
    pub fn resample(&self, step: f64) -> Result<Self> {
        let n = self.aligned_count(step)?;
        let x0 = self.x_min();
        let xs: Vec<f64> = (0..n).map(|k| x0 + k as f64 * step).collect();
        let ys = xs.iter().map(|&x| self.eval(x)).collect();
        Self::new(xs, ys)
    }

    /// Number of points on a `step` lattice over the span; the sample step
    /// must be a whole multiple of `step`.
    fn aligned_count(&self, resolution: f64) -> Result<usize> {
        let mismatch = || Error::ResolutionMismatch {
            step: self.span() / (self.len() - 1) as f64,
            resolution,
        };
        if !(resolution > 0.0) {
            return Err(mismatch());
        }
        let step = self.uniform_step().ok_or_else(|| {
            Error::InvalidBoundary("samples must be uniformly spaced for rasterization".into())
        })?;
        let k = step / resolution;
        if k.round() < 1.0 || (k - k.round()).abs() > 1e-6 * k.max(1.0) {
            return Err(mismatch());
        }
        Ok((self.len() - 1) * k.round() as usize + 1)
    }
}

/// Analytic boundary families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundaryKind {
    Flat {
        offset: f64,
    },
    Sine {
        offset: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
    CompositeSine {
        offset: f64,
        components: Vec<SineComponent>,
    },
    /// Explicit `(x, y)` samples; `span` and `step` are ignored.
    Samples {
        points: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SineComponent {
    pub amplitude: f64,
    pub period: f64,
    #[serde(default)]
    pub phase: f64,
}

impl SineComponent {
    fn eval(&self, x: f64) -> f64 {
        self.amplitude * (std::f64::consts::TAU * x / self.period + self.phase).sin()
    }
}

/// Samples an analytic boundary on `x = k * step`, `k = 0..=span/step`.
pub fn generate_boundary(kind: &BoundaryKind, span: f64, step: f64) -> Result<Boundary> {
    if let BoundaryKind::Samples { points } = kind {
        let (xs, ys) = points.iter().copied().unzip();
        return Boundary::new(xs, ys);
    }
    if !(step > 0.0 && step.is_finite()) || !(span > 0.0 && span.is_finite()) {
        return Err(Error::InvalidBoundary(format!(
            "span and step must be positive, got span = {span}, step = {step}"
        )));
    }
    let n = (span / step + 1e-9).floor() as usize + 1;
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let f: Box<dyn Fn(f64) -> f64> = match kind {
        BoundaryKind::Flat { offset } => {
            let offset = *offset;
            Box::new(move |_| offset)
        }
        BoundaryKind::Sine {
            offset,
            amplitude,
            period,
            phase,
        } => {
            if !(*period > 0.0) {
                return Err(Error::InvalidBoundary("sine period must be positive".into()));
            }
            let c = SineComponent {
                amplitude: *amplitude,
                period: *period,
                phase: *phase,
            };
            let offset = *offset;
            Box::new(move |x| offset + c.eval(x))
        }
        BoundaryKind::CompositeSine { offset, components } => {
            if components.iter().any(|c| !(c.period > 0.0)) {
                return Err(Error::InvalidBoundary("sine period must be positive".into()));
            }
            let (offset, components) = (*offset, components.clone());
            Box::new(move |x| offset + components.iter().map(|c| c.eval(x)).sum::<f64>())
        }
        BoundaryKind::Samples { .. } => unreachable!(),
    };
    let xs: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
    let ys = xs.iter().map(|&x| f(x)).collect();
    Boundary::new(xs, ys)
}

/// Extra workspace around a boundary when it is rasterized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    /// Added left of the first and right of the last sample.
    pub horizontal: f64,
    /// Added above the highest boundary point.
    pub above: f64,
    /// Added below the lowest boundary point.
    pub below: f64,
}

impl Margins {
    /// Room for closing with the circumcircle, chord searches one body length
    /// past the span ends, and paths up to two circumradii below the boundary.
    pub fn for_robot(spec: &RobotSpec, resolution: f64) -> Self {
        let r1 = spec.big_radius();
        let slack = 3.0 * resolution;
        Self {
            horizontal: 2.0 * r1 + spec.length() + slack,
            above: r1 + slack,
            below: 2.0 * r1 + slack,
        }
    }
}

/// Rasterizes the obstacle `{y >= f(x)}` at `resolution`.
///
/// Columns are centered on the boundary's x lattice, extended by
/// `margins.horizontal` on both sides. Row edges sit on multiples of
/// `resolution`, so a boundary value on a multiple of the resolution falls
/// exactly between two rows.
pub fn rasterize_obstacle(b: &Boundary, resolution: f64, margins: Margins) -> Result<BinaryGrid> {
    let n = b.aligned_count(resolution)?;
    let pad = (margins.horizontal / resolution - 1e-9).ceil().max(0.0) as usize;
    let width = n + 2 * pad;
    let x0 = b.x_min() - pad as f64 * resolution;
    let heights: Vec<f64> = (0..width)
        .map(|i| b.eval_extended(x0 + i as f64 * resolution))
        .collect();
    let lo = heights.iter().copied().fold(f64::INFINITY, f64::min) - margins.below;
    let hi = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max) + margins.above;
    let first_row = (lo / resolution).floor();
    let height = ((hi / resolution).ceil() - first_row).max(1.0) as usize;
    let origin = (x0, (first_row + 0.5) * resolution);
    let mut grid = BinaryGrid::new(width, height, resolution, origin)?;
    fill_obstacle(&mut grid, |i| heights[i]);
    Ok(grid)
}

/// Rasterizes the obstacle onto an existing grid geometry, using the
/// extended boundary at each column center.
pub fn rasterize_on(b: &Boundary, geometry: &BinaryGrid) -> BinaryGrid {
    let mut grid = geometry.clone();
    let (x0, res) = (geometry.origin().0, geometry.resolution());
    fill_obstacle(&mut grid, |i| b.eval_extended(x0 + i as f64 * res));
    grid
}

fn fill_obstacle(grid: &mut BinaryGrid, height_at: impl Fn(usize) -> f64) {
    for i in 0..grid.width() {
        let f = height_at(i);
        for j in 0..grid.height() {
            let y = grid.world((i as isize, j as isize)).1;
            grid.set((i as isize, j as isize), y >= f);
        }
    }
}

/// Lower edge of the lowest foreground cell in the column containing each x.
pub fn lower_envelope(grid: &BinaryGrid, xs: &[f64]) -> Result<Vec<f64>> {
    let res = grid.resolution();
    xs.iter()
        .map(|&x| {
            let (i, _) = grid.cell((x, grid.origin().1));
            if i < 0 || i as usize >= grid.width() {
                return Err(Error::PathOutsideGrid { x });
            }
            let j = grid
                .lowest_in_column(i as usize)
                .ok_or(Error::EmptyColumn { column: i as usize })?;
            Ok(grid.world((i, j as isize)).1 - res / 2.0)
        })
        .collect()
}

/// Raw boundary after closing with the circumcircle disk, with the
/// intermediate rasters kept for inspection.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    /// Closed boundary over the raw span, one sample per cell column.
    pub boundary: Boundary,
    /// Closed boundary over every column unaffected by the grid border.
    pub extended: Boundary,
    /// Raw obstacle raster.
    pub obstacle: BinaryGrid,
    /// Obstacle dilated by the circumcircle disk.
    pub dilated: BinaryGrid,
    /// Closed obstacle.
    pub closed: BinaryGrid,
}

/// Closes the raw obstacle with the circumcircle disk and reads the closed
/// boundary back off the raster.
///
/// Where closing leaves a column's lowest obstacle cell unchanged, the raw
/// height is kept instead of the cell edge; it lies in the same cell and
/// spares the derivatives the staircase noise.
pub fn preprocess(b: &Boundary, spec: &RobotSpec, resolution: f64) -> Result<Preprocessed> {
    let margins = Margins::for_robot(spec, resolution);
    let obstacle = rasterize_obstacle(b, resolution, margins)?;
    let disk = DiskSE::new(spec.big_radius(), resolution);
    let dilated = dilate(&obstacle, &disk);
    let closed = erode(&dilated, &disk);

    // columns within one element extent of the left/right border are
    // corrupted by the out-of-grid-is-background rule
    let guard = disk.extent() + 1;
    let w = obstacle.width();
    if w <= 2 * guard {
        return Err(Error::InvalidBoundary("boundary too short to preprocess".into()));
    }
    let column_x = |i: usize| obstacle.world((i as isize, 0)).0;
    let mut heights = Vec::with_capacity(w - 2 * guard);
    for i in guard..w - guard {
        let raw_low = obstacle
            .lowest_in_column(i)
            .ok_or(Error::EmptyColumn { column: i })?;
        let low = closed
            .lowest_in_column(i)
            .ok_or(Error::EmptyColumn { column: i })?;
        let contiguous = low <= raw_low
            && (low..=raw_low).all(|j| closed.get((i as isize, j as isize)));
        if !contiguous {
            return Err(Error::NonFunctionEnvelope { column: i });
        }
        // untouched columns keep the sub-cell raw height
        heights.push(if low == raw_low {
            b.eval_extended(column_x(i))
        } else {
            closed.world((i as isize, low as isize)).1 - resolution / 2.0
        });
    }

    let ext_xs: Vec<f64> = (guard..w - guard).map(column_x).collect();
    let n = b.aligned_count(resolution)?;
    let pad = obstacle.cell((b.x_min(), 0.0)).0 as usize;
    let xs = ext_xs[pad - guard..pad - guard + n].to_vec();
    let ys = heights[pad - guard..pad - guard + n].to_vec();
    let extended = Boundary::new(ext_xs, heights)?;
    let boundary = Boundary::new(xs, ys)?;

    Ok(Preprocessed {
        boundary,
        extended,
        obstacle,
        dilated,
        closed,
    })
}

/// Closed boundary only; see [`preprocess`].
pub fn preprocess_boundary(b: &Boundary, spec: &RobotSpec, resolution: f64) -> Result<Boundary> {
    preprocess(b, spec, resolution).map(|p| p.boundary)
}
