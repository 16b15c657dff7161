//! Sliding-chopstick geometry: a segment of body length with both ends on
//! the boundary, and the robot center half a body width below it.

use crate::boundary::Boundary;
use crate::robot::RobotSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordPlacement {
    pub start: (f64, f64),
    pub end: (f64, f64),
    pub center: (f64, f64),
}

/// Chord from sample `i` to the first point ahead at distance `l`, found on
/// the first sample `j` with `dist >= l` and refined on segment `j-1..j`.
/// The center is the chord midpoint moved `w/2` along the chord normal that
/// points toward decreasing y. `None` when the boundary ends first.
pub fn chopstick_center(b: &Boundary, i: usize, spec: &RobotSpec) -> Option<ChordPlacement> {
    let l = spec.length();
    let (xs, ys) = (b.xs(), b.ys());
    let p = (xs[i], ys[i]);
    let dist = |k: usize| (xs[k] - p.0).hypot(ys[k] - p.1);
    let j = (i + 1..xs.len()).find(|&k| dist(k) >= l)?;

    // |d0 + t e| = l on the segment from sample j-1 to j
    let d0 = (xs[j - 1] - p.0, ys[j - 1] - p.1);
    let e = (xs[j] - xs[j - 1], ys[j] - ys[j - 1]);
    let a = e.0 * e.0 + e.1 * e.1;
    let bq = 2.0 * (d0.0 * e.0 + d0.1 * e.1);
    let c = d0.0 * d0.0 + d0.1 * d0.1 - l * l;
    let disc = (bq * bq - 4.0 * a * c).max(0.0);
    let t = ((-bq + disc.sqrt()) / (2.0 * a)).clamp(0.0, 1.0);
    let q = (xs[j - 1] + t * e.0, ys[j - 1] + t * e.1);

    let len = (q.0 - p.0).hypot(q.1 - p.1);
    let u = ((q.0 - p.0) / len, (q.1 - p.1) / len);
    let normal = (u.1, -u.0);
    let half_w = spec.width() / 2.0;
    let center = (
        0.5 * (p.0 + q.0) + half_w * normal.0,
        0.5 * (p.1 + q.1) + half_w * normal.1,
    );
    Some(ChordPlacement {
        start: p,
        end: q,
        center,
    })
}

/// Chopstick center heights resampled onto `xs`.
///
/// The centers form a polyline in placement order; each `x` takes the lowest
/// crossing of that polyline, so folds keep the safer branch. Entries outside
/// the polyline's x range are `None`.
pub fn slide_curve(b: &Boundary, spec: &RobotSpec, xs: &[f64]) -> Vec<Option<f64>> {
    let mut out: Vec<Option<f64>> = vec![None; xs.len()];
    if xs.is_empty() {
        return out;
    }
    let centers: Vec<(f64, f64)> = (0..b.len())
        .map_while(|i| chopstick_center(b, i, spec))
        .map(|c| c.center)
        .collect();
    let mut keep = |k: usize, y: f64| {
        out[k] = Some(out[k].map_or(y, |v: f64| v.min(y)));
    };
    let first = xs[0];
    let last = xs[xs.len() - 1];
    for w in centers.windows(2) {
        let (a, c) = (w[0], w[1]);
        let (lo, hi) = (a.0.min(c.0), a.0.max(c.0));
        if hi < first || lo > last {
            continue;
        }
        let from = xs.partition_point(|&x| x < lo - 1e-12);
        let to = xs.partition_point(|&x| x <= hi + 1e-12);
        for k in from..to {
            let y = if (c.0 - a.0).abs() < 1e-12 {
                a.1.min(c.1)
            } else {
                a.1 + (xs[k] - a.0) / (c.0 - a.0) * (c.1 - a.1)
            };
            keep(k, y);
        }
    }
    out
}
