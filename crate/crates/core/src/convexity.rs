//! Discrete derivatives and convex/concave labels along a boundary.
//!
//! "Convex" refers to the obstacle: with the obstacle above the boundary, a
//! positive second derivative means the obstacle bulges into the lawn and the
//! robot's long side can lie flat against it.

use serde::{Deserialize, Serialize};

use crate::boundary::Boundary;
use crate::error::{Error, Result};

/// Moving-average width used when none is given, in samples.
pub const DEFAULT_WINDOW: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curvature {
    Convex,
    Concave,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityProfile {
    pub ydot: Vec<f64>,
    pub yddot: Vec<f64>,
    pub labels: Vec<Curvature>,
}

impl ConvexityProfile {
    pub fn is_convex(&self, i: usize) -> bool {
        self.labels[i] == Curvature::Convex
    }

    /// Number of convex/concave label changes in `labels[from..to]`.
    pub fn label_changes(&self, from: usize, to: usize) -> usize {
        self.labels[from..to]
            .windows(2)
            .filter(|w| w[0] != w[1])
            .count()
    }
}

/// Smoothed first and second derivatives of a uniformly sampled boundary,
/// labeled convex where the second derivative is strictly positive.
pub fn convexity(b: &Boundary, window: usize) -> Result<ConvexityProfile> {
    convexity_with_threshold(b, window, 0.0)
}

/// As [`convexity`], labeling convex where `yddot > threshold`.
pub fn convexity_with_threshold(
    b: &Boundary,
    window: usize,
    threshold: f64,
) -> Result<ConvexityProfile> {
    let n = b.len();
    if n < 5 {
        return Err(Error::TooFewSamples { needed: 5, got: n });
    }
    if window > n {
        return Err(Error::WindowTooLarge { window, samples: n });
    }
    let h = b
        .uniform_step()
        .ok_or_else(|| Error::InvalidBoundary("convexity needs uniform samples".into()))?;
    let ydot = moving_average(&derivative(b.ys(), h), window);
    let yddot = moving_average(&derivative(&ydot, h), window);
    let labels = yddot
        .iter()
        .map(|&v| {
            if v > threshold {
                Curvature::Convex
            } else {
                Curvature::Concave
            }
        })
        .collect();
    Ok(ConvexityProfile {
        ydot,
        yddot,
        labels,
    })
}

/// Central differences inside, second-order one-sided differences at the
/// two ends. Exact for quadratics.
fn derivative(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    d
}

/// Centered moving average. Near the ends the window shrinks symmetrically,
/// so linear data passes through unchanged.
fn moving_average(v: &[f64], window: usize) -> Vec<f64> {
    let n = v.len();
    let half = window.saturating_sub(1) / 2;
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + v[i];
    }
    (0..n)
        .map(|i| {
            let r = half.min(i).min(n - 1 - i);
            (prefix[i + r + 1] - prefix[i - r]) / (2 * r + 1) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampled(f: impl Fn(f64) -> f64, x0: f64, x1: f64, h: f64) -> Boundary {
        let n = ((x1 - x0) / h).round() as usize + 1;
        let xs: Vec<f64> = (0..n).map(|k| x0 + k as f64 * h).collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        Boundary::new(xs, ys).unwrap()
    }

    #[test]
    fn parabola_has_constant_second_derivative() {
        let h = 0.01;
        let p = convexity(&sampled(|x| x * x, -2.0, 2.0, h), DEFAULT_WINDOW).unwrap();
        for (i, &v) in p.yddot.iter().enumerate() {
            assert!((v - 2.0).abs() < 10.0 * h, "sample {i}: {v}");
        }
        assert!(p.labels.iter().all(|&l| l == Curvature::Convex));
    }

    #[test]
    fn line_is_not_convex() {
        let b = sampled(|x| 0.3 * x - 1.0, 0.0, 3.0, 0.01);
        let p = convexity_with_threshold(&b, DEFAULT_WINDOW, 1e-6).unwrap();
        for &v in &p.yddot {
            assert!(v.abs() < 1e-9);
        }
        for &v in &p.ydot {
            assert!((v - 0.3).abs() < 1e-9);
        }
        assert!(p.labels.iter().all(|&l| l == Curvature::Concave));
    }

    #[test]
    fn flat_is_exactly_zero() {
        let p = convexity(&sampled(|_| 2.0, 0.0, 5.0, 0.01), DEFAULT_WINDOW).unwrap();
        assert!(p.yddot.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn sine_sign_follows_negative_sine() {
        let p = convexity(&sampled(f64::sin, 0.0, 12.0, 0.01), DEFAULT_WINDOW).unwrap();
        for (k, &v) in p.yddot.iter().enumerate() {
            let x = k as f64 * 0.01;
            let s = -x.sin();
            if s.abs() > 0.05 {
                assert_eq!(v > 0.0, s > 0.0, "x = {x}");
            }
        }
    }

    #[test]
    fn threshold_knob_moves_labels() {
        let b = sampled(|x| x * x, -1.0, 1.0, 0.01);
        let p = convexity_with_threshold(&b, DEFAULT_WINDOW, 5.0).unwrap();
        assert!(p.labels.iter().all(|&l| l == Curvature::Concave));
    }

    #[test]
    fn argument_errors() {
        let short = sampled(|x| x, 0.0, 0.03, 0.01);
        assert!(matches!(
            convexity(&short, 1),
            Err(Error::TooFewSamples { .. })
        ));
        let b = sampled(|x| x, 0.0, 0.1, 0.01);
        assert!(matches!(
            convexity(&b, 12),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn moving_average_preserves_lines() {
        let v: Vec<f64> = (0..20).map(|i| 3.0 * i as f64 + 1.0).collect();
        let s = moving_average(&v, 7);
        for (a, b) in v.iter().zip(&s) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
