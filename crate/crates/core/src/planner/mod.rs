//! Edge-following planners.
//!
//! Every planner works on the closed boundary `D*` and returns the robot
//! center as a function graph over the same x lattice:
//!
//! * `big`, `small`, `mow`: lower envelope of `D*` dilated by the
//!   circumcircle, inscribed circle, or mowing disk. Only `big` is safe
//!   everywhere; the other two are reference curves.
//! * `bsdp`: the small-disk envelope where `D*` is convex, the big-disk
//!   envelope elsewhere.
//! * `scp`: the lower of the small-disk envelope and the sliding-chopstick
//!   curve, where the body's long side spans a boundary chord of length `l`.

mod chopstick;
mod smooth;

use serde::{Deserialize, Serialize};

use crate::boundary::{lower_envelope, preprocess, rasterize_on, Boundary, Margins, Preprocessed};
use crate::convexity::{convexity_with_threshold, ConvexityProfile, Curvature, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::grid::BinaryGrid;
use crate::morphology::{dilate, DiskSE};
use crate::robot::RobotSpec;

pub use chopstick::{chopstick_center, slide_curve, ChordPlacement};
pub use smooth::{smooth_path, smooth_path_with, SmoothingOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Big,
    Small,
    Mow,
    Bsdp,
    Scp,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Mow,
        Method::Small,
        Method::Scp,
        Method::Bsdp,
        Method::Big,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Big => "big",
            Method::Small => "small",
            Method::Mow => "mow",
            Method::Bsdp => "bsdp",
            Method::Scp => "scp",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "big" => Ok(Method::Big),
            "small" => Ok(Method::Small),
            "mow" => Ok(Method::Mow),
            "bsdp" => Ok(Method::Bsdp),
            "scp" => Ok(Method::Scp),
            other => Err(Error::Parse(format!("unknown planner '{other}'"))),
        }
    }
}

/// Robot center pose. Heading is in radians from +x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPath {
    pub poses: Vec<Pose>,
    pub method: Method,
    pub smoothed: bool,
    /// Non-fatal planner notes, e.g. truncation at the span end.
    pub diagnostics: Vec<String>,
}

impl PlannedPath {
    /// Builds a path from center samples, with headings from the local tangent.
    pub fn from_samples(xs: &[f64], ys: &[f64], method: Method) -> Self {
        let hs = headings(xs, ys);
        let poses = xs
            .iter()
            .zip(ys)
            .zip(hs)
            .map(|((&x, &y), heading)| Pose { x, y, heading })
            .collect();
        Self {
            poses,
            method,
            smoothed: false,
            diagnostics: Vec::new(),
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        self.poses.iter().map(|p| p.x).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.poses.iter().map(|p| p.y).collect()
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    /// Polyline length through the pose centers.
    pub fn length(&self) -> f64 {
        self.poses
            .windows(2)
            .map(|w| (w[1].x - w[0].x).hypot(w[1].y - w[0].y))
            .sum()
    }

    /// Linear interpolation of the center height at `x`, clamped at the ends.
    pub fn y_at(&self, x: f64) -> f64 {
        let n = self.poses.len();
        if x <= self.poses[0].x {
            return self.poses[0].y;
        }
        if x >= self.poses[n - 1].x {
            return self.poses[n - 1].y;
        }
        let k = self.poses.partition_point(|p| p.x <= x);
        let (a, b) = (self.poses[k - 1], self.poses[k]);
        a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y)
    }
}

/// Tangent direction at each sample: central differences inside, one-sided
/// at the ends.
pub fn headings(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            if n < 2 {
                return 0.0;
            }
            let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (ys[b] - ys[a]).atan2(xs[b] - xs[a])
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerOptions {
    /// Moving-average width for the convexity derivatives, in samples.
    pub convexity_window: usize,
    /// `yddot` above this counts as convex.
    pub convexity_threshold: f64,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        Self {
            convexity_window: DEFAULT_WINDOW,
            convexity_threshold: 0.0,
        }
    }
}

/// Preprocesses a raw boundary once and plans any method against it.
#[derive(Debug, Clone)]
pub struct EdgePlanner {
    raw: Boundary,
    spec: RobotSpec,
    resolution: f64,
    pre: Preprocessed,
    /// Rasterized `D*` on the preprocessing grid.
    obstacle_star: BinaryGrid,
    profile: ConvexityProfile,
    /// Convexity over the extended closed boundary.
    ext_profile: ConvexityProfile,
    /// Index of the first span sample within the extended boundary.
    span_offset: usize,
}

impl EdgePlanner {
    pub fn new(raw: &Boundary, spec: &RobotSpec, resolution: f64) -> Result<Self> {
        Self::with_options(raw, spec, resolution, PlannerOptions::default())
    }

    pub fn with_options(
        raw: &Boundary,
        spec: &RobotSpec,
        resolution: f64,
        options: PlannerOptions,
    ) -> Result<Self> {
        if raw.span() < spec.length() {
            return Err(Error::InvalidBoundary(format!(
                "boundary span {} m is shorter than the robot ({} m)",
                raw.span(),
                spec.length()
            )));
        }
        let pre = preprocess(raw, spec, resolution)?;
        let obstacle_star = rasterize_on(&pre.extended, &pre.obstacle);

        // derivatives on the extended curve so the span ends see full windows
        let ext = convexity_with_threshold(
            &pre.extended,
            options.convexity_window,
            options.convexity_threshold,
        )?;
        let offset = pre.obstacle.cell((pre.boundary.x_min(), 0.0)).0 as usize
            - pre.obstacle.cell((pre.extended.x_min(), 0.0)).0 as usize;
        let n = pre.boundary.len();
        let profile = ConvexityProfile {
            ydot: ext.ydot[offset..offset + n].to_vec(),
            yddot: ext.yddot[offset..offset + n].to_vec(),
            labels: ext.labels[offset..offset + n].to_vec(),
        };

        Ok(Self {
            raw: raw.clone(),
            spec: *spec,
            resolution,
            pre,
            obstacle_star,
            profile,
            ext_profile: ext,
            span_offset: offset,
        })
    }

    pub fn raw(&self) -> &Boundary {
        &self.raw
    }

    pub fn spec(&self) -> &RobotSpec {
        &self.spec
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn preprocessed(&self) -> &Preprocessed {
        &self.pre
    }

    /// Closed boundary `D*` over the raw span.
    pub fn boundary_star(&self) -> &Boundary {
        &self.pre.boundary
    }

    /// Convexity of `D*`, one entry per `D*` sample.
    pub fn convexity(&self) -> &ConvexityProfile {
        &self.profile
    }

    /// Lower envelope of `D*` dilated by a disk, sampled on the `D*` lattice.
    pub fn disk_envelope(&self, radius: f64) -> Result<Vec<f64>> {
        self.envelope_on(radius, self.pre.boundary.xs())
    }

    fn envelope_on(&self, radius: f64, xs: &[f64]) -> Result<Vec<f64>> {
        if radius < self.resolution {
            return Err(Error::RadiusTooSmall {
                radius,
                resolution: self.resolution,
            });
        }
        let dilated = dilate(&self.obstacle_star, &DiskSE::new(radius, self.resolution));
        lower_envelope(&dilated, xs)
    }

    fn span(&self) -> std::ops::Range<usize> {
        self.span_offset..self.span_offset + self.pre.boundary.len()
    }

    pub fn plan(&self, method: Method) -> Result<PlannedPath> {
        self.plan_window(method, self.span())
    }

    /// Plans over the span plus one body length of the extended `D*` on
    /// each side, smooths, and crops back to the span samples. The spline
    /// then sees the path continue past the span ends instead of flattening
    /// there.
    pub fn plan_smoothed(&self, method: Method, options: &SmoothingOptions) -> Result<PlannedPath> {
        let span = self.span();
        let context = (self.spec.length() / self.resolution).ceil() as usize;
        let lo = span.start.saturating_sub(context);
        let hi = (span.end + context).min(self.pre.extended.len());
        let wide = smooth_path_with(&self.plan_window(method, lo..hi)?, self.resolution, options)?;
        let on_span = self.plan(method)?;
        let (first, last) = (on_span.poses[0].x, on_span.poses[on_span.len() - 1].x);
        let tol = 1e-6 * self.resolution;
        let poses = wide
            .poses
            .into_iter()
            .filter(|p| p.x >= first - tol && p.x <= last + tol)
            .collect();
        Ok(PlannedPath {
            poses,
            method,
            smoothed: true,
            diagnostics: on_span.diagnostics,
        })
    }

    /// Plans on the extended samples `window`.
    fn plan_window(&self, method: Method, window: std::ops::Range<usize>) -> Result<PlannedPath> {
        let xs = &self.pre.extended.xs()[window.clone()];
        let disk = |radius: f64, method: Method| -> Result<PlannedPath> {
            Ok(PlannedPath::from_samples(xs, &self.envelope_on(radius, xs)?, method))
        };
        match method {
            Method::Big => disk(self.spec.big_radius(), Method::Big),
            Method::Small => disk(self.spec.small_radius(), Method::Small),
            Method::Mow => disk(self.spec.mow_radius(), Method::Mow),
            Method::Bsdp => self.bsdp_on(xs, &self.ext_profile.labels[window]),
            Method::Scp => self.scp_on(xs),
        }
    }

    /// Small-disk envelope on convex samples, big-disk envelope elsewhere.
    pub fn plan_bsdp(&self) -> Result<PlannedPath> {
        self.plan(Method::Bsdp)
    }

    fn bsdp_on(&self, xs: &[f64], labels: &[Curvature]) -> Result<PlannedPath> {
        let big = self.envelope_on(self.spec.big_radius(), xs)?;
        let small = self.envelope_on(self.spec.small_radius(), xs)?;
        let ys: Vec<f64> = (0..xs.len())
            .map(|i| if labels[i] == Curvature::Convex { small[i] } else { big[i] })
            .collect();
        Ok(PlannedPath::from_samples(xs, &ys, Method::Bsdp))
    }

    /// Pointwise minimum of the sliding-chopstick curve and the small-disk
    /// envelope. Samples the chopstick cannot reach are cut from the path.
    pub fn plan_scp(&self) -> Result<PlannedPath> {
        self.plan(Method::Scp)
    }

    fn scp_on(&self, xs: &[f64]) -> Result<PlannedPath> {
        let small = self.envelope_on(self.spec.small_radius(), xs)?;
        let slide = slide_curve(&self.pre.extended, &self.spec, xs);
        let mut diagnostics = Vec::new();

        let changes = self.max_label_changes_per_body_length();
        if changes > 1 {
            let msg = format!(
                "closed boundary changes convexity {changes} times within one robot length"
            );
            log::warn!("{msg}");
            diagnostics.push(msg);
        }

        let first = slide.iter().position(Option::is_some);
        let last = slide.iter().rposition(Option::is_some);
        let (Some(first), Some(last)) = (first, last) else {
            return Err(Error::InvalidBoundary(
                "no chord of robot length fits on the boundary".into(),
            ));
        };
        if first > 0 || last + 1 < xs.len() {
            let msg = format!(
                "chopstick path truncated to x in [{:.3}, {:.3}]",
                xs[first], xs[last]
            );
            log::warn!("{msg}");
            diagnostics.push(msg);
        }
        let ys: Vec<f64> = (first..=last)
            .map(|i| match slide[i] {
                Some(s) => s.min(small[i]),
                None => small[i],
            })
            .collect();
        let mut path = PlannedPath::from_samples(&xs[first..=last], &ys, Method::Scp);
        path.diagnostics = diagnostics;
        Ok(path)
    }

    fn max_label_changes_per_body_length(&self) -> usize {
        let n = self.profile.labels.len();
        let w = ((self.spec.length() / self.resolution).round() as usize).min(n);
        if w < 2 {
            return 0;
        }
        (0..=n - w)
            .map(|s| self.profile.label_changes(s, s + w))
            .max()
            .unwrap_or(0)
    }
}

/// Lower envelope of a closed boundary dilated by a disk of `radius`. The
/// boundary must be uniformly sampled; its step is the raster resolution.
pub fn plan_disk(b_star: &Boundary, radius: f64, method: Method) -> Result<PlannedPath> {
    let resolution = b_star
        .uniform_step()
        .ok_or_else(|| Error::InvalidBoundary("boundary must be uniformly sampled".into()))?;
    if radius < resolution {
        return Err(Error::RadiusTooSmall { radius, resolution });
    }
    let slack = 3.0 * resolution;
    let margins = Margins {
        horizontal: radius + slack,
        above: slack,
        below: 2.0 * radius + slack,
    };
    let grid = crate::boundary::rasterize_obstacle(b_star, resolution, margins)?;
    let dilated = dilate(&grid, &DiskSE::new(radius, resolution));
    let ys = lower_envelope(&dilated, b_star.xs())?;
    Ok(PlannedPath::from_samples(b_star.xs(), &ys, method))
}

/// Big-and-small-disk planning from a raw boundary.
pub fn plan_bsdp(raw: &Boundary, spec: &RobotSpec, resolution: f64) -> Result<PlannedPath> {
    EdgePlanner::new(raw, spec, resolution)?.plan_bsdp()
}

/// Sliding-chopstick planning from a raw boundary.
pub fn plan_scp(raw: &Boundary, spec: &RobotSpec, resolution: f64) -> Result<PlannedPath> {
    EdgePlanner::new(raw, spec, resolution)?.plan_scp()
}
