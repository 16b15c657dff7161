//! Plain SVG figures. Output is deterministic text: fixed layout, fixed
//! number formatting, no timestamps.

use std::fmt::Write;

use ecpp::boundary::Preprocessed;
use ecpp::sweep::FootprintPose;
use ecpp::tracking::Trajectory;
use ecpp::{Boundary, ConvexityProfile, CoverageReport, Method, PlannedPath, RobotSpec};

const PANEL_W: f64 = 880.0;
const PANEL_H: f64 = 260.0;
const MARGIN: f64 = 50.0;

pub fn method_color(m: Method) -> &'static str {
    match m {
        Method::Big => "#1f77b4",
        Method::Small => "#2ca02c",
        Method::Mow => "#9467bd",
        Method::Bsdp => "#ff7f0e",
        Method::Scp => "#d62728",
    }
}

/// World-to-pixel mapping for one rectangular plot area. SVG y grows
/// downward, so world y is flipped.
#[derive(Debug, Clone, Copy)]
struct Panel {
    x: (f64, f64),
    y: (f64, f64),
    left: f64,
    top: f64,
    width: f64,
    height: f64,
}

impl Panel {
    fn new(x: (f64, f64), y: (f64, f64), top: f64) -> Self {
        let pad = |(lo, hi): (f64, f64)| {
            let d = (hi - lo).max(1e-9) * 0.05;
            (lo - d, hi + d)
        };
        Self {
            x: pad(x),
            y: pad(y),
            left: MARGIN,
            top,
            width: PANEL_W,
            height: PANEL_H,
        }
    }

    /// Same scale on both axes, for geometry that should not look squashed.
    fn equal_aspect(x: (f64, f64), y: (f64, f64), top: f64) -> Self {
        let mut p = Self::new(x, y, top);
        let sx = p.width / (p.x.1 - p.x.0);
        let sy = p.height / (p.y.1 - p.y.0);
        if sx < sy {
            let mid = 0.5 * (p.y.0 + p.y.1);
            let half = 0.5 * p.height / sx;
            p.y = (mid - half, mid + half);
        } else {
            let mid = 0.5 * (p.x.0 + p.x.1);
            let half = 0.5 * p.width / sy;
            p.x = (mid - half, mid + half);
        }
        p
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            self.left + (x - self.x.0) / (self.x.1 - self.x.0) * self.width,
            self.top + (self.y.1 - y) / (self.y.1 - self.y.0) * self.height,
        )
    }
}

struct Figure {
    height: f64,
    body: String,
}

impl Figure {
    fn new(panels: usize) -> Self {
        Self {
            height: panels as f64 * (PANEL_H + MARGIN) + MARGIN,
            body: String::new(),
        }
    }

    fn panel_top(k: usize) -> f64 {
        MARGIN + k as f64 * (PANEL_H + MARGIN)
    }

    fn frame(&mut self, p: &Panel, title: &str) {
        writeln!(
            self.body,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##,
            p.left, p.top, p.width, p.height
        )
        .unwrap();
        self.text((p.left, p.top - 8.0), title, 14.0);
        self.text((p.left, p.top + p.height + 16.0), &format!("{:.2}", p.x.0), 11.0);
        let right = format!("{:.2}", p.x.1);
        self.text((p.left + p.width - 6.0 * right.len() as f64, p.top + p.height + 16.0), &right, 11.0);
        self.text((4.0, p.top + p.height), &format!("{:.2}", p.y.0), 11.0);
        self.text((4.0, p.top + 10.0), &format!("{:.2}", p.y.1), 11.0);
    }

    fn text(&mut self, (x, y): (f64, f64), s: &str, size: f64) {
        writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="{size}">{}</text>"#,
            escape(s)
        )
        .unwrap();
    }

    fn polyline(&mut self, p: &Panel, pts: impl IntoIterator<Item = (f64, f64)>, color: &str, width: f64) {
        let mut d = String::new();
        for q in pts {
            let (x, y) = p.map(q);
            write!(d, "{x:.2},{y:.2} ").unwrap();
        }
        writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            d.trim_end()
        )
        .unwrap();
    }

    fn polygon(&mut self, p: &Panel, pts: &[(f64, f64)], stroke: &str, fill: &str) {
        let mut d = String::new();
        for &q in pts {
            let (x, y) = p.map(q);
            write!(d, "{x:.2},{y:.2} ").unwrap();
        }
        writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" stroke="{stroke}" stroke-width="0.6"/>"#,
            d.trim_end()
        )
        .unwrap();
    }

    fn legend(&mut self, p: &Panel, entries: &[(&str, &str)]) {
        for (k, (label, color)) in entries.iter().enumerate() {
            let y = p.top + 14.0 + 16.0 * k as f64;
            let x = p.left + p.width - 130.0;
            writeln!(
                self.body,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
                y - 4.0,
                x + 20.0,
                y - 4.0
            )
            .unwrap();
            self.text((x + 26.0, y), label, 11.0);
        }
    }

    fn finish(self) -> String {
        let w = PANEL_W + 2.0 * MARGIN;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            h = self.height
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(vals: impl IntoIterator<Item = f64>) -> (f64, f64) {
    vals.into_iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Raw edge over the closed edge, top panel raw only, bottom both.
pub fn preprocessing(raw: &Boundary, pre: &Preprocessed) -> String {
    let mut fig = Figure::new(2);
    let xr = (raw.x_min(), raw.x_max());
    let yr = range(raw.ys().iter().chain(pre.boundary.ys()).copied());
    let top = Panel::new(xr, yr, Figure::panel_top(0));
    fig.frame(&top, "raw boundary");
    fig.polyline(&top, raw.points(), "#333", 1.2);
    let bottom = Panel::new(xr, yr, Figure::panel_top(1));
    fig.frame(&bottom, "closed with the circumcircle disk");
    fig.polyline(&bottom, raw.points(), "#bbb", 1.0);
    fig.polyline(&bottom, pre.boundary.points(), "#d62728", 1.4);
    fig.legend(&bottom, &[("raw", "#bbb"), ("closed", "#d62728")]);
    fig.finish()
}

/// Closed edge with its first and second derivatives.
pub fn convexity(b_star: &Boundary, profile: &ConvexityProfile) -> String {
    let mut fig = Figure::new(3);
    let xs = b_star.xs();
    let xr = (b_star.x_min(), b_star.x_max());
    let series: [(&str, Vec<f64>); 3] = [
        ("closed boundary y", b_star.ys().to_vec()),
        ("first derivative", profile.ydot.clone()),
        ("second derivative (> 0 convex)", profile.yddot.clone()),
    ];
    for (k, (title, ys)) in series.iter().enumerate() {
        let mut yr = range(ys.iter().copied());
        if k == 2 {
            yr = (yr.0.min(0.0), yr.1.max(0.0));
        }
        let p = Panel::new(xr, yr, Figure::panel_top(k));
        fig.frame(&p, title);
        if k == 2 {
            fig.polyline(&p, [(xr.0, 0.0), (xr.1, 0.0)], "#aaa", 0.8);
        }
        fig.polyline(&p, xs.iter().copied().zip(ys.iter().copied()), "#1f77b4", 1.2);
    }
    fig.finish()
}

/// Every planned path against the raw and closed edges.
pub fn paths(raw: &Boundary, b_star: &Boundary, paths: &[&PlannedPath]) -> String {
    let mut fig = Figure::new(1);
    let yr = range(
        raw.ys()
            .iter()
            .copied()
            .chain(paths.iter().flat_map(|p| p.ys())),
    );
    let p = Panel::new((raw.x_min(), raw.x_max()), yr, Figure::panel_top(0));
    fig.frame(&p, "planned robot centers");
    fig.polyline(&p, raw.points(), "#bbb", 1.0);
    fig.polyline(&p, b_star.points(), "#333", 1.2);
    let mut legend = vec![("raw", "#bbb"), ("closed", "#333")];
    for path in paths {
        let c = method_color(path.method);
        fig.polyline(&p, path.poses.iter().map(|q| (q.x, q.y)), c, 1.2);
        legend.push((path.method.as_str(), c));
    }
    fig.legend(&p, &legend);
    fig.finish()
}

/// Body rectangles along a path, every `every` poses.
pub fn footprints(b_star: &Boundary, path: &PlannedPath, spec: &RobotSpec, every: usize) -> String {
    let mut fig = Figure::new(1);
    let r = spec.big_radius();
    let yr = range(
        b_star
            .ys()
            .iter()
            .copied()
            .chain(path.ys().iter().map(|y| y - r)),
    );
    let p = Panel::equal_aspect((b_star.x_min(), b_star.x_max()), yr, Figure::panel_top(0));
    fig.frame(&p, &format!("{} footprints", path.method));
    let c = method_color(path.method);
    for pose in path.poses.iter().step_by(every.max(1)) {
        let corners = FootprintPose::new(pose, spec).corners();
        fig.polygon(&p, &corners, c, "none");
    }
    fig.polyline(&p, path.poses.iter().map(|q| (q.x, q.y)), c, 1.0);
    fig.polyline(&p, b_star.points(), "#333", 1.4);
    fig.finish()
}

/// Uncut area per method.
pub fn uncut_bars(reports: &[&CoverageReport]) -> String {
    let mut fig = Figure::new(1);
    let max = reports.iter().map(|r| r.uncut_area).fold(0.0, f64::max).max(1e-9);
    let p = Panel::new((0.0, reports.len() as f64), (0.0, max), Figure::panel_top(0));
    fig.frame(&p, "uncut area [m^2]");
    for (k, r) in reports.iter().enumerate() {
        let x0 = k as f64 + 0.2;
        let x1 = k as f64 + 0.8;
        let c = method_color(r.method);
        fig.polygon(&p, &[(x0, 0.0), (x1, 0.0), (x1, r.uncut_area), (x0, r.uncut_area)], c, c);
        let (tx, ty) = p.map((x0, r.uncut_area));
        fig.text((tx, ty - 6.0), &format!("{} {:.4}", r.method, r.uncut_area), 12.0);
    }
    fig.finish()
}

/// Tracked trajectory over the planned path.
pub fn tracking(b_star: &Boundary, path: &PlannedPath, traj: &Trajectory) -> String {
    let mut fig = Figure::new(1);
    let yr = range(
        b_star
            .ys()
            .iter()
            .copied()
            .chain(path.ys())
            .chain(traj.states.iter().map(|s| s.y)),
    );
    let p = Panel::new((b_star.x_min(), b_star.x_max()), yr, Figure::panel_top(0));
    fig.frame(
        &p,
        &format!(
            "{} tracking: max error {:.4} m, rms {:.4} m",
            path.method,
            traj.max_error(),
            traj.rms_error()
        ),
    );
    fig.polyline(&p, b_star.points(), "#333", 1.2);
    fig.polyline(&p, path.poses.iter().map(|q| (q.x, q.y)), "#d62728", 1.2);
    fig.polyline(&p, traj.states.iter().map(|s| (s.x, s.y)), "#1f77b4", 1.0);
    fig.legend(&p, &[("planned", "#d62728"), ("tracked", "#1f77b4")]);
    fig.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_flips_y() {
        let p = Panel::new((0.0, 10.0), (0.0, 1.0), 0.0);
        let (_, top) = p.map((0.0, p.y.1));
        let (_, bottom) = p.map((0.0, p.y.0));
        assert!(top < bottom);
    }

    #[test]
    fn equal_aspect_keeps_scales_equal() {
        let p = Panel::equal_aspect((0.0, 12.0), (1.0, 3.0), 0.0);
        let sx = p.width / (p.x.1 - p.x.0);
        let sy = p.height / (p.y.1 - p.y.0);
        assert!((sx - sy).abs() < 1e-9);
    }

    #[test]
    fn text_is_escaped() {
        let mut f = Figure::new(1);
        f.text((0.0, 0.0), "a < b & c", 10.0);
        assert!(f.finish().contains("a &lt; b &amp; c"));
    }

    #[test]
    fn bars_are_deterministic() {
        let r = CoverageReport {
            method: Method::Scp,
            uncut_area: 1.5,
            cut_area: 3.0,
            path_length: 12.0,
            max_violation_depth: 0.0,
            violation_count: 0,
            boundary_digest: None,
        };
        let a = uncut_bars(&[&r]);
        assert_eq!(a, uncut_bars(&[&r]));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
    }
}
