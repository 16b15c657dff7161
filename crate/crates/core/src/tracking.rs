//! Kinematic path tracking for a differential-drive robot.
//!
//! The robot is a unicycle integrated with forward Euler. The controller
//! picks a target a fixed arc length ahead of the nearest path point and
//! applies proportional laws: speed from the target distance along the
//! heading, turn rate from the bearing error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planner::PlannedPath;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RobotState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
    pub omega: f64,
}

impl RobotState {
    pub fn at(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta,
            v: 0.0,
            omega: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerGains {
    pub k_linear: f64,
    pub k_angular: f64,
    pub v_max: f64,
    pub omega_max: f64,
    pub lookahead: f64,
}

impl Default for ControllerGains {
    fn default() -> Self {
        Self {
            k_linear: 1.0,
            k_angular: 4.0,
            v_max: 0.5,
            omega_max: 2.0,
            lookahead: 0.3,
        }
    }
}

impl ControllerGains {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("k_linear", self.k_linear),
            ("k_angular", self.k_angular),
            ("v_max", self.v_max),
            ("omega_max", self.omega_max),
            ("lookahead", self.lookahead),
        ];
        match fields.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            Some((name, v)) => Err(Error::InvalidGains(format!("{name} must be positive, got {v}"))),
            None => Ok(()),
        }
    }
}

/// One forward-Euler step of the unicycle model. The commands are applied
/// as given and recorded on the returned state.
pub fn step(s: &RobotState, v: f64, omega: f64, dt: f64) -> RobotState {
    let (sin, cos) = s.theta.sin_cos();
    RobotState {
        x: s.x + v * cos * dt,
        y: s.y + v * sin * dt,
        theta: s.theta + omega * dt,
        v,
        omega,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackingOptions {
    pub dt: f64,
    /// Stop once within this distance of the path end.
    pub goal_tolerance: f64,
    /// Abort when the cross-track error exceeds this.
    pub divergence_limit: f64,
    /// Step budget; derived from path length and `v_max` when unset.
    pub max_steps: Option<usize>,
}

impl Default for TrackingOptions {
    fn default() -> Self {
        Self {
            dt: 0.01,
            goal_tolerance: 0.01,
            divergence_limit: 1.0,
            max_steps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    /// State at `t = k * dt`, starting with the initial state.
    pub states: Vec<RobotState>,
    /// Cross-track error at each state.
    pub errors: Vec<f64>,
}

impl Trajectory {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn rms_error(&self) -> f64 {
        let ss: f64 = self.errors.iter().map(|e| e * e).sum();
        (ss / self.errors.len().max(1) as f64).sqrt()
    }

    pub fn final_error(&self) -> f64 {
        self.errors.last().copied().unwrap_or(0.0)
    }

    pub fn duration(&self) -> f64 {
        (self.states.len().saturating_sub(1)) as f64 * self.dt
    }
}

/// Arc-length parametrized polyline.
struct Track {
    pts: Vec<(f64, f64)>,
    arc: Vec<f64>,
}

impl Track {
    fn new(path: &PlannedPath) -> Self {
        let pts: Vec<(f64, f64)> = path.poses.iter().map(|p| (p.x, p.y)).collect();
        let mut arc = Vec::with_capacity(pts.len());
        let mut s = 0.0;
        arc.push(0.0);
        for w in pts.windows(2) {
            s += (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1);
            arc.push(s);
        }
        Self { pts, arc }
    }

    fn total(&self) -> f64 {
        self.arc[self.arc.len() - 1]
    }

    /// Nearest point on segments `from..` up to `horizon` of arc length
    /// ahead: (segment index, arc length, distance).
    fn nearest(&self, p: (f64, f64), from: usize, horizon: f64) -> (usize, f64, f64) {
        if self.pts.len() == 1 {
            let d = (p.0 - self.pts[0].0).hypot(p.1 - self.pts[0].1);
            return (0, 0.0, d);
        }
        let limit = self.arc[from] + horizon;
        let mut best = (from, self.arc[from], f64::INFINITY);
        for k in from..self.pts.len() - 1 {
            if self.arc[k] > limit {
                break;
            }
            let (a, b) = (self.pts[k], self.pts[k + 1]);
            let (ex, ey) = (b.0 - a.0, b.1 - a.1);
            let len2 = ex * ex + ey * ey;
            let t = if len2 > 0.0 {
                (((p.0 - a.0) * ex + (p.1 - a.1) * ey) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let d = (p.0 - a.0 - t * ex).hypot(p.1 - a.1 - t * ey);
            if d < best.2 {
                best = (k, self.arc[k] + t * (self.arc[k + 1] - self.arc[k]), d);
            }
        }
        best
    }

    fn point_at(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, self.total());
        let k = self.arc.partition_point(|&a| a <= s).clamp(1, self.arc.len().max(2) - 1);
        if self.pts.len() == 1 {
            return self.pts[0];
        }
        let (a, b) = (self.pts[k - 1], self.pts[k]);
        let seg = self.arc[k] - self.arc[k - 1];
        let t = if seg > 0.0 { (s - self.arc[k - 1]) / seg } else { 0.0 };
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    }
}

fn wrap_angle(a: f64) -> f64 {
    let t = (a + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU);
    t - std::f64::consts::PI
}

/// Tracks `path` from `s0` with the default options at step `dt`.
pub fn track(
    path: &PlannedPath,
    s0: &RobotState,
    gains: &ControllerGains,
    dt: f64,
) -> Result<Trajectory> {
    let options = TrackingOptions {
        dt,
        ..TrackingOptions::default()
    };
    track_with(path, s0, gains, &options)
}

pub fn track_with(
    path: &PlannedPath,
    s0: &RobotState,
    gains: &ControllerGains,
    options: &TrackingOptions,
) -> Result<Trajectory> {
    gains.validate()?;
    if path.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    if !(options.dt > 0.0 && options.dt.is_finite()) {
        return Err(Error::InvalidGains(format!("dt must be positive, got {}", options.dt)));
    }
    let dt = options.dt;
    let track = Track::new(path);
    let end = track.pts[track.pts.len() - 1];
    let budget = options.max_steps.unwrap_or_else(|| {
        let seconds = 4.0 * track.total() / gains.v_max + 20.0;
        (seconds / dt).ceil() as usize
    });
    // how far the nearest point may advance per step
    let horizon = 1.0 + 2.0 * gains.v_max * dt;

    let mut s = *s0;
    let (mut seg, _, mut err) = track.nearest((s.x, s.y), 0, f64::INFINITY);
    let mut states = vec![s];
    let mut errors = vec![err];
    for k in 0..budget {
        if (s.x - end.0).hypot(s.y - end.1) <= options.goal_tolerance {
            return Ok(Trajectory { dt, states, errors });
        }
        let (_, arc, _) = track.nearest((s.x, s.y), seg, horizon);
        let target = track.point_at(arc + gains.lookahead);
        let (dx, dy) = (target.0 - s.x, target.1 - s.y);
        let (sin, cos) = s.theta.sin_cos();
        let along = dx * cos + dy * sin;
        let bearing = wrap_angle(dy.atan2(dx) - s.theta);
        let v = (gains.k_linear * along).clamp(-gains.v_max, gains.v_max);
        let omega = (gains.k_angular * bearing).clamp(-gains.omega_max, gains.omega_max);
        s = step(&s, v, omega, dt);

        let near = track.nearest((s.x, s.y), seg, horizon);
        seg = near.0;
        err = near.2;
        states.push(s);
        errors.push(err);
        if err > options.divergence_limit {
            return Err(Error::Diverged {
                time: (k + 1) as f64 * dt,
                error: err,
            });
        }
    }
    Err(Error::NotConverged { steps: budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::Method;
    use std::f64::consts::PI;

    fn straight(len: f64) -> PlannedPath {
        let xs: Vec<f64> = (0..=(len * 100.0) as usize).map(|k| k as f64 * 0.01).collect();
        PlannedPath::from_samples(&xs, &vec![0.0; xs.len()], Method::Scp)
    }

    #[test]
    fn straight_step() {
        let s = step(&RobotState::default(), 1.0, 0.0, 0.1);
        assert_eq!((s.x, s.y, s.theta), (0.1, 0.0, 0.0));
    }

    #[test]
    fn rotation_in_place() {
        let s = step(&RobotState::at(1.0, 2.0, 0.0), 0.0, PI, 0.5);
        assert_eq!((s.x, s.y), (1.0, 2.0));
        assert!((s.theta - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn circle_closes_as_dt_shrinks() {
        // v = 1, omega = 1 traces the unit circle centered at (0, 1)
        let dt = 1e-3;
        let n = (2.0 * PI / dt).round() as usize;
        let mut s = RobotState::default();
        let mut worst: f64 = 0.0;
        for k in 1..=n {
            s = step(&s, 1.0, 1.0, dt);
            let t = k as f64 * dt;
            let exact = (t.sin(), 1.0 - t.cos());
            worst = worst.max((s.x - exact.0).hypot(s.y - exact.1));
        }
        assert!(worst < 1e-2, "{worst}");
    }

    #[test]
    fn on_path_start_stays_on_path() {
        let t = track(&straight(3.0), &RobotState::at(0.0, 0.0, 0.0), &Default::default(), 0.01)
            .unwrap();
        assert!(t.max_error() < 1e-12);
        let last = t.states.last().unwrap();
        assert!((last.x - 3.0).abs() <= 0.01);
    }

    #[test]
    fn lateral_offset_converges_without_overshoot() {
        let t = track(&straight(6.0), &RobotState::at(0.0, 0.1, 0.0), &Default::default(), 0.01)
            .unwrap();
        assert!(t.final_error() < 0.02);
        assert!(t.max_error() <= 0.1 + 1e-9);
        // never crosses far to the other side
        assert!(t.states.iter().all(|s| s.y > -0.15));
    }

    #[test]
    fn zero_gains_are_rejected() {
        let gains = ControllerGains {
            k_linear: 0.0,
            k_angular: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            track(&straight(2.0), &RobotState::default(), &gains, 0.01),
            Err(Error::InvalidGains(_))
        ));
    }

    #[test]
    fn divergence_is_reported() {
        let opts = TrackingOptions {
            divergence_limit: 0.05,
            ..Default::default()
        };
        let r = track_with(
            &straight(2.0),
            &RobotState::at(0.0, 0.1, 0.0),
            &Default::default(),
            &opts,
        );
        assert!(matches!(r, Err(Error::Diverged { .. })), "{r:?}");
    }

    #[test]
    fn budget_exhaustion() {
        let opts = TrackingOptions {
            max_steps: Some(10),
            ..Default::default()
        };
        let r = track_with(&straight(2.0), &RobotState::default(), &Default::default(), &opts);
        assert!(matches!(r, Err(Error::NotConverged { steps: 10 })));
    }

    #[test]
    fn wrap() {
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert_eq!(wrap_angle(0.25), 0.25);
    }
}
