//! Cubic smoothing splines.
//!
//! Minimizes `sum (y_i - g(x_i))² + alpha * integral g''(x)² dx` over natural
//! cubic splines `g` with knots at the samples, using the Reinsch banded
//! formulation: solve `(R + alpha QᵀQ) gamma = Qᵀ y`, then
//! `g = y - alpha Q gamma`. `QᵀQ` and `R` are pentadiagonal and tridiagonal,
//! so each fit is `O(n)`.

use crate::error::{Error, Result};

/// Fitted spline values at the knots for a fixed smoothing weight.
pub fn smoothing_spline(xs: &[f64], ys: &[f64], alpha: f64) -> Result<Vec<f64>> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::InvalidBoundary("x and y lengths differ".into()));
    }
    if n < 4 {
        return Err(Error::TooFewSamples { needed: 4, got: n });
    }
    if alpha == 0.0 {
        return Ok(ys.to_vec());
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let m = n - 2;
    // column k of Q touches rows k, k+1, k+2
    let q: Vec<[f64; 3]> = (0..m)
        .map(|k| {
            let (a, b) = (1.0 / h[k], 1.0 / h[k + 1]);
            [a, -a - b, b]
        })
        .collect();

    // band[i] = [A(i,i), A(i,i-1), A(i,i-2)]
    let mut band = vec![[0.0f64; 3]; m];
    for i in 0..m {
        band[i][0] = (h[i] + h[i + 1]) / 3.0 + alpha * q[i].iter().map(|v| v * v).sum::<f64>();
        if i >= 1 {
            let (p, c) = (q[i - 1], q[i]);
            band[i][1] = h[i] / 6.0 + alpha * (p[1] * c[0] + p[2] * c[1]);
        }
        if i >= 2 {
            band[i][2] = alpha * q[i - 2][2] * q[i][0];
        }
    }
    let rhs: Vec<f64> = (0..m)
        .map(|k| q[k][0] * ys[k] + q[k][1] * ys[k + 1] + q[k][2] * ys[k + 2])
        .collect();
    let gamma = solve_banded_spd(&band, &rhs)?;

    let mut g = ys.to_vec();
    for k in 0..m {
        for (r, qv) in q[k].iter().enumerate() {
            g[k + r] -= alpha * qv * gamma[k];
        }
    }
    Ok(g)
}

/// Cholesky solve for a symmetric positive definite matrix with two
/// sub-diagonals.
fn solve_banded_spd(band: &[[f64; 3]], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = band.len();
    let mut l = vec![[0.0f64; 3]; m];
    for i in 0..m {
        for d in (0..=2.min(i)).rev() {
            let j = i - d;
            let mut s = band[i][d];
            // sum over k in max(i-2, 0)..j of L(i,k) L(j,k)
            for k in i.saturating_sub(2)..j {
                s -= l[i][i - k] * l[j][j - k];
            }
            if d == 0 {
                if s <= 0.0 {
                    return Err(Error::InvalidBoundary(
                        "smoothing system is not positive definite".into(),
                    ));
                }
                l[i][0] = s.sqrt();
            } else {
                l[i][d] = s / l[j][0];
            }
        }
    }
    let mut z = vec![0.0; m];
    for i in 0..m {
        let mut s = rhs[i];
        for d in 1..=2.min(i) {
            s -= l[i][d] * z[i - d];
        }
        z[i] = s / l[i][0];
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = z[i];
        for d in 1..=2 {
            if i + d < m {
                s -= l[i + d][d] * x[i + d];
            }
        }
        x[i] = s / l[i][0];
    }
    Ok(x)
}

fn rms(a: &[f64], b: &[f64]) -> f64 {
    let ss: f64 = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum();
    (ss / a.len() as f64).sqrt()
}

/// Smoothest fit whose residual RMS stays within `target_rms`.
///
/// Bisects `log(alpha)`; residual RMS grows monotonically with `alpha`.
pub fn fit_to_rms(xs: &[f64], ys: &[f64], target_rms: f64) -> Result<(f64, Vec<f64>)> {
    const ALPHA_MIN: f64 = 1e-14;
    const ALPHA_MAX: f64 = 1e4;
    let top = smoothing_spline(xs, ys, ALPHA_MAX)?;
    if rms(&top, ys) <= target_rms {
        return Ok((ALPHA_MAX, top));
    }
    let (mut lo, mut hi) = (ALPHA_MIN.ln(), ALPHA_MAX.ln());
    let mut best = (0.0, ys.to_vec());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let g = smoothing_spline(xs, ys, mid.exp())?;
        if rms(&g, ys) <= target_rms {
            best = (mid.exp(), g);
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}
