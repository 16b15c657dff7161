//! Footprint collision checks and cut/uncut area accounting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::Boundary;
use crate::error::{Error, Result};
use crate::grid::BinaryGrid;
use crate::planner::{Method, PlannedPath, Pose};
use crate::robot::RobotSpec;

/// Collision tolerance used throughout, in meters.
pub const DEFAULT_TOLERANCE: f64 = 0.02;

/// The robot body as an oriented rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootprintPose {
    pub center: (f64, f64),
    pub heading: f64,
    pub half_length: f64,
    pub half_width: f64,
}

impl FootprintPose {
    pub fn new(pose: &Pose, spec: &RobotSpec) -> Self {
        Self {
            center: (pose.x, pose.y),
            heading: pose.heading,
            half_length: spec.length() / 2.0,
            half_width: spec.width() / 2.0,
        }
    }

    /// Corners in counter-clockwise order starting front-left.
    pub fn corners(&self) -> [(f64, f64); 4] {
        let (s, c) = self.heading.sin_cos();
        let at = |a: f64, b: f64| {
            (
                self.center.0 + a * c - b * s,
                self.center.1 + a * s + b * c,
            )
        };
        let (l, w) = (self.half_length, self.half_width);
        [at(l, w), at(-l, w), at(-l, -w), at(l, -w)]
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        let (s, c) = self.heading.sin_cos();
        let (dx, dy) = (p.0 - self.center.0, p.1 - self.center.1);
        let along = dx * c + dy * s;
        let across = -dx * s + dy * c;
        along.abs() <= self.half_length && across.abs() <= self.half_width
    }

    /// Vertices of the part of the square cell centered at `c` that lies
    /// inside the body.
    pub fn clip_cell(&self, c: (f64, f64), resolution: f64) -> Vec<(f64, f64)> {
        let (s, co) = self.heading.sin_cos();
        let h = resolution / 2.0;
        // body frame: x along the heading, y across
        let mut poly: Vec<(f64, f64)> = [(-h, -h), (h, -h), (h, h), (-h, h)]
            .iter()
            .map(|&(dx, dy)| {
                let (px, py) = (c.0 + dx - self.center.0, c.1 + dy - self.center.1);
                (px * co + py * s, -px * s + py * co)
            })
            .collect();
        let planes = [
            (1.0, 0.0, self.half_length),
            (-1.0, 0.0, self.half_length),
            (0.0, 1.0, self.half_width),
            (0.0, -1.0, self.half_width),
        ];
        for (nx, ny, d) in planes {
            let inside = |p: &(f64, f64)| nx * p.0 + ny * p.1 <= d;
            let mut out = Vec::with_capacity(poly.len() + 2);
            for k in 0..poly.len() {
                let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
                if inside(&a) {
                    out.push(a);
                }
                if inside(&a) != inside(&b) {
                    let (fa, fb) = (nx * a.0 + ny * a.1 - d, nx * b.0 + ny * b.1 - d);
                    let t = fa / (fa - fb);
                    out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
                }
            }
            poly = out;
            if poly.is_empty() {
                break;
            }
        }
        poly.iter()
            .map(|&(u, v)| (self.center.0 + u * co - v * s, self.center.1 + u * s + v * co))
            .collect()
    }

    fn bounding_box(&self) -> ((f64, f64), (f64, f64)) {
        let cs = self.corners();
        let min = cs.iter().fold((f64::MAX, f64::MAX), |m, p| (m.0.min(p.0), m.1.min(p.1)));
        let max = cs.iter().fold((f64::MIN, f64::MIN), |m, p| (m.0.max(p.0), m.1.max(p.1)));
        (min, max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionSummary {
    /// Deepest body point above the closed boundary, meters.
    pub max_violation_depth: f64,
    /// Poses whose penetration exceeds the tolerance.
    pub violation_count: usize,
    pub tolerance: f64,
}

impl CollisionSummary {
    pub fn passes(&self) -> bool {
        self.max_violation_depth <= self.tolerance
    }
}

/// Rasterizes the body at every pose and measures how far it reaches into
/// the obstacle `{y >= b_star(x)}`.
///
/// The footprint is every cell the rectangle overlaps, on the boundary's
/// column lattice with row edges on multiples of the resolution. Each cell
/// that can reach the obstacle is clipped to the rectangle and its
/// penetration is the highest clipped point above `b_star`. The boundary is
/// linear between column centers, so the maximum sits on a clipped vertex
/// or where the clipped polygon crosses the column center.
pub fn check_collision(
    path: &PlannedPath,
    b_star: &Boundary,
    spec: &RobotSpec,
    tolerance: f64,
) -> Result<CollisionSummary> {
    let res = b_star
        .uniform_step()
        .ok_or_else(|| Error::InvalidBoundary("boundary must be uniformly sampled".into()))?;
    check_span(path, b_star, res)?;
    let depths: Vec<f64> = path
        .poses
        .par_iter()
        .map(|pose| footprint_penetration(&FootprintPose::new(pose, spec), b_star, res))
        .collect();
    let max_violation_depth = depths.iter().copied().fold(0.0, f64::max);
    let violation_count = depths.iter().filter(|&&d| d > tolerance).count();
    Ok(CollisionSummary {
        max_violation_depth,
        violation_count,
        tolerance,
    })
}

fn footprint_penetration(fp: &FootprintPose, b_star: &Boundary, res: f64) -> f64 {
    let (min, max) = fp.bounding_box();
    let x0 = b_star.x_min();
    let col = |x: f64| ((x - x0) / res).round() as isize;
    let row = |y: f64| (y / res).floor() as isize;
    let mut depth: f64 = 0.0;
    for i in col(min.0)..=col(max.0) {
        let cx = x0 + i as f64 * res;
        let h = res / 2.0;
        let f = |x: f64| b_star.eval_extended(x);
        // lowest boundary point across the column
        let low = f(cx - h).min(f(cx)).min(f(cx + h));
        for j in row(min.1.max(low))..=row(max.1) {
            let cy = (j as f64 + 0.5) * res;
            let poly = fp.clip_cell((cx, cy), res);
            for (k, &p) in poly.iter().enumerate() {
                depth = depth.max(p.1 - f(p.0));
                let q = poly[(k + 1) % poly.len()];
                if (p.0 - cx) * (q.0 - cx) < 0.0 {
                    let t = (cx - p.0) / (q.0 - p.0);
                    depth = depth.max(p.1 + t * (q.1 - p.1) - f(cx));
                }
            }
        }
    }
    depth
}

fn check_span(path: &PlannedPath, b: &Boundary, res: f64) -> Result<()> {
    let eps = 1e-6 * res;
    match path
        .poses
        .iter()
        .find(|p| p.x < b.x_min() - eps || p.x > b.x_max() + eps)
    {
        Some(p) => Err(Error::PathOutsideGrid { x: p.x }),
        None if path.is_empty() => Err(Error::TooFewSamples { needed: 1, got: 0 }),
        None => Ok(()),
    }
}

/// Squared distance from `p` to the segment `a..b`.
fn segment_distance_sq(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (ex, ey) = (b.0 - a.0, b.1 - a.1);
    let len2 = ex * ex + ey * ey;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * ex + (p.1 - a.1) * ey) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (dx, dy) = (p.0 - (a.0 + t * ex), p.1 - (a.1 + t * ey));
    dx * dx + dy * dy
}

/// Cells swept by the mowing disk: every cell whose center is within the
/// mowing radius of the path polyline, plus the cells the polyline passes
/// through. Drawn onto `geometry`.
pub fn swept_region(path: &PlannedPath, spec: &RobotSpec, geometry: &BinaryGrid) -> BinaryGrid {
    let mut grid = BinaryGrid::new(
        geometry.width(),
        geometry.height(),
        geometry.resolution(),
        geometry.origin(),
    )
    .expect("geometry is valid");
    let res = grid.resolution();
    let r = spec.mow_radius();
    let r2 = r * r;
    let pts: Vec<(f64, f64)> = path.poses.iter().map(|p| (p.x, p.y)).collect();
    let segments: Vec<((f64, f64), (f64, f64))> = if pts.len() == 1 {
        vec![(pts[0], pts[0])]
    } else {
        pts.windows(2).map(|w| (w[0], w[1])).collect()
    };
    for &(a, b) in &segments {
        let (i0, j0) = grid.cell((a.0.min(b.0) - r, a.1.min(b.1) - r));
        let (i1, j1) = grid.cell((a.0.max(b.0) + r, a.1.max(b.1) + r));
        for j in j0..=j1 {
            for i in i0..=i1 {
                if segment_distance_sq(grid.world((i, j)), a, b) <= r2 {
                    grid.set((i, j), true);
                }
            }
        }
        // cells the centerline itself crosses
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        let steps = (len / (0.25 * res)).ceil() as usize;
        for s in 0..=steps {
            let t = if steps == 0 { 0.0 } else { s as f64 / steps as f64 };
            let c = grid.cell((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
            grid.set(c, true);
        }
    }
    grid
}

/// Grid covering the mowing strip of `path` below `raw`, with row edges on
/// multiples of `resolution` and columns on the path's x lattice.
pub fn coverage_geometry(
    path: &PlannedPath,
    raw: &Boundary,
    spec: &RobotSpec,
    resolution: f64,
) -> Result<BinaryGrid> {
    let r = spec.mow_radius();
    let pad = ((r / resolution).ceil() as usize) + 2;
    let xs = path.xs();
    let ys = path.ys();
    let x0 = xs[0] - pad as f64 * resolution;
    let width = ((xs[xs.len() - 1] - xs[0]) / resolution).round() as usize + 1 + 2 * pad;
    let lo = ys.iter().copied().fold(f64::INFINITY, f64::min) - r - 2.0 * resolution;
    let hi = raw
        .ys()
        .iter()
        .chain(&ys)
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        + r
        + 2.0 * resolution;
    let first_row = (lo / resolution).floor();
    let height = ((hi / resolution).ceil() - first_row).max(1.0) as usize;
    BinaryGrid::new(width, height, resolution, (x0, (first_row + 0.5) * resolution))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub method: Method,
    #[serde(rename = "uncut_area_m2")]
    pub uncut_area: f64,
    #[serde(rename = "cut_area_m2")]
    pub cut_area: f64,
    #[serde(rename = "path_length_m")]
    pub path_length: f64,
    #[serde(rename = "max_violation_m")]
    pub max_violation_depth: f64,
    #[serde(rename = "violations")]
    pub violation_count: usize,
    /// SHA-256 of the raw boundary samples; reports are comparable only
    /// when these agree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_digest: Option<String>,
}

impl CoverageReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Per-column strip from the path up to the raw boundary, split into cells
/// the mowing disk sweeps (cut) and cells it misses (uncut).
///
/// Columns sit on the path's x lattice at `resolution` spacing; a cell
/// belongs to the strip iff `y_path(x) <= y_center < f(x)`.
pub fn uncut_area(
    path: &PlannedPath,
    raw: &Boundary,
    spec: &RobotSpec,
    resolution: f64,
) -> Result<CoverageReport> {
    check_span(path, raw, resolution)?;
    let geometry = coverage_geometry(path, raw, spec, resolution)?;
    let swept = swept_region(path, spec, &geometry);
    let xs = path.xs();
    let columns = ((xs[xs.len() - 1] - xs[0]) / resolution).round() as usize + 1;
    let (mut cut, mut uncut) = (0usize, 0usize);
    for k in 0..columns {
        let x = xs[0] + k as f64 * resolution;
        let (y_path, f) = (path.y_at(x), raw.eval(x));
        if y_path >= f {
            return Err(Error::PathAboveBoundary {
                x,
                path_y: y_path,
                boundary_y: f,
            });
        }
        let (i, j_path) = geometry.cell((x, y_path));
        let mut j = j_path - 1;
        loop {
            let y = geometry.world((i, j)).1;
            if y >= f {
                break;
            }
            if y >= y_path {
                if swept.get((i, j)) {
                    cut += 1;
                } else {
                    uncut += 1;
                }
            }
            j += 1;
        }
    }
    let cell = resolution * resolution;
    Ok(CoverageReport {
        method: path.method,
        uncut_area: uncut as f64 * cell,
        cut_area: cut as f64 * cell,
        path_length: path.length(),
        max_violation_depth: 0.0,
        violation_count: 0,
        boundary_digest: Some(raw.digest()),
    })
}

/// Uncut area against the raw boundary plus collision diagnostics against
/// the closed boundary.
pub fn evaluate(
    path: &PlannedPath,
    raw: &Boundary,
    b_star: &Boundary,
    spec: &RobotSpec,
    resolution: f64,
    tolerance: f64,
) -> Result<CoverageReport> {
    let mut report = uncut_area(path, raw, spec, resolution)?;
    let collision = check_collision(path, b_star, spec, tolerance)?;
    report.max_violation_depth = collision.max_violation_depth;
    report.violation_count = collision.violation_count;
    Ok(report)
}
