//! Independent oracles and fixtures shared by the integration tests.
//!
//! Everything here is written from the set and geometry definitions, not from
//! the library's algorithms.
#![allow(dead_code)]

use ecpp::{generate_boundary, BinaryGrid, Boundary, BoundaryKind, RobotSpec, StructuringElement};
use rand::Rng;

pub const RES: f64 = 0.01;

pub fn robot() -> RobotSpec {
    RobotSpec::new(0.8, 0.4, 0.15).unwrap()
}

/// The 20-boundary sine corpus: amplitudes 0.3..=1.0 m in four steps,
/// periods 2..=6 m, offset 2 m, span 12 m.
pub fn sine_corpus() -> Vec<(f64, f64, Boundary)> {
    let mut out = Vec::new();
    for a in 0..4 {
        let amplitude = 0.3 + 0.7 * a as f64 / 3.0;
        for period in 2..=6 {
            let kind = BoundaryKind::Sine {
                offset: 2.0,
                amplitude,
                period: period as f64,
                phase: 0.0,
            };
            out.push((amplitude, period as f64, generate_boundary(&kind, 12.0, RES).unwrap()));
        }
    }
    out
}

pub fn random_grid(rng: &mut impl Rng, w: usize, h: usize, density: f64) -> BinaryGrid {
    BinaryGrid::from_fn(w, h, 1.0, (0.0, 0.0), |_, _| rng.gen_bool(density)).unwrap()
}

/// Random content with a background border `pad` cells wide.
pub fn random_padded_grid(rng: &mut impl Rng, w: usize, h: usize, pad: usize, density: f64) -> BinaryGrid {
    BinaryGrid::from_fn(w, h, 1.0, (0.0, 0.0), |i, j| {
        let inside = i >= pad && j >= pad && i + pad < w && j + pad < h;
        inside && rng.gen_bool(density)
    })
    .unwrap()
}

fn fg(a: &BinaryGrid, (i, j): (isize, isize)) -> bool {
    a.in_bounds((i, j)) && a.get((i, j))
}

/// `{ z : exists b in B, z - b in A }`
pub fn oracle_dilate(a: &BinaryGrid, b: &StructuringElement) -> BinaryGrid {
    BinaryGrid::from_fn(a.width(), a.height(), a.resolution(), a.origin(), |i, j| {
        b.offsets()
            .iter()
            .any(|&(dx, dy)| fg(a, (i as isize - dx, j as isize - dy)))
    })
    .unwrap()
}

/// `{ z : for all b in B, z + b in A }`
pub fn oracle_erode(a: &BinaryGrid, b: &StructuringElement) -> BinaryGrid {
    BinaryGrid::from_fn(a.width(), a.height(), a.resolution(), a.origin(), |i, j| {
        b.offsets()
            .iter()
            .all(|&(dx, dy)| fg(a, (i as isize + dx, j as isize + dy)))
    })
    .unwrap()
}

pub fn union(a: &BinaryGrid, b: &BinaryGrid) -> BinaryGrid {
    BinaryGrid::from_fn(a.width(), a.height(), a.resolution(), a.origin(), |i, j| {
        let c = (i as isize, j as isize);
        a.get(c) || b.get(c)
    })
    .unwrap()
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (ex, ey) = (b.0 - a.0, b.1 - a.1);
    let len2 = ex * ex + ey * ey;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * ex + (p.1 - a.1) * ey) / len2).clamp(0.0, 1.0)
    };
    (p.0 - a.0 - t * ex).hypot(p.1 - a.1 - t * ey)
}

/// Cells of `geometry` whose center lies within `r` of some path segment,
/// checked against every segment.
pub fn brute_swept(pts: &[(f64, f64)], r: f64, geometry: &BinaryGrid) -> BinaryGrid {
    let segs: Vec<_> = if pts.len() == 1 {
        vec![(pts[0], pts[0])]
    } else {
        pts.windows(2).map(|w| (w[0], w[1])).collect()
    };
    BinaryGrid::from_fn(
        geometry.width(),
        geometry.height(),
        geometry.resolution(),
        geometry.origin(),
        |i, j| {
            let c = geometry.world((i as isize, j as isize));
            segs.iter().any(|&(a, b)| point_segment_distance(c, a, b) <= r)
        },
    )
    .unwrap()
}

/// Deepest point of the rectangle perimeter above `f`, sampled every
/// `spacing` meters. Zero when the body is clear.
pub fn perimeter_depth(
    center: (f64, f64),
    heading: f64,
    spec: &RobotSpec,
    f: impl Fn(f64) -> f64,
    spacing: f64,
) -> f64 {
    let (s, c) = heading.sin_cos();
    let (hl, hw) = (spec.length() / 2.0, spec.width() / 2.0);
    let local = [(hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)];
    let world: Vec<(f64, f64)> = local
        .iter()
        .map(|&(u, v)| (center.0 + u * c - v * s, center.1 + u * s + v * c))
        .collect();
    let mut depth: f64 = 0.0;
    for k in 0..4 {
        let (a, b) = (world[k], world[(k + 1) % 4]);
        let n = ((b.0 - a.0).hypot(b.1 - a.1) / spacing).ceil() as usize;
        for m in 0..=n {
            let t = m as f64 / n as f64;
            let p = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            depth = depth.max(p.1 - f(p.0));
        }
    }
    depth
}

/// Closing of `{y >= f}` by a disk of radius `r`, in the continuum.
///
/// A disk centered at `(cx, cy)` fits in the lawn iff
/// `cy <= g(cx) = min_x' f(x') - sqrt(r^2 - (x' - cx)^2)`; the closed
/// boundary is the upper envelope of all fitting disks.
pub fn continuous_closing(f: impl Fn(f64) -> f64, r: f64, xs: &[f64], step: f64) -> Vec<f64> {
    let n = (r / step).ceil() as isize;
    let arc = |d: f64| (r * r - d * d).max(0.0).sqrt();
    let g = |cx: f64| {
        (-n..=n)
            .map(|k| {
                let d = k as f64 * step;
                f(cx + d) - arc(d)
            })
            .fold(f64::INFINITY, f64::min)
    };
    xs.iter()
        .map(|&x| {
            (-n..=n)
                .map(|k| {
                    let d = k as f64 * step;
                    g(x + d) + arc(d)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}
