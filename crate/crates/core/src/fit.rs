//! Weighted least-squares line fitting.

use crate::{DspError, Result};

/// Fit `y = slope * x + intercept` minimizing the weighted squared residual.
/// Returns `(slope, intercept)`.
pub fn wls_line_fit(xs: &[f64], ys: &[f64], weights: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() != weights.len() {
        return Err(DspError::SizeMismatch {
            expected: xs.len(),
            got: ys.len().max(weights.len()),
        });
    }
    if xs.len() < 2 {
        return Err(DspError::DegenerateInput("need at least two points"));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(DspError::DegenerateInput("negative weight"));
    }
    let wsum: f64 = weights.iter().sum();
    if wsum <= 0.0 {
        return Err(DspError::SingularFit);
    }
    let xbar = xs.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() / wsum;
    let ybar = ys.iter().zip(weights).map(|(y, w)| y * w).sum::<f64>() / wsum;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..xs.len() {
        let dx = xs[i] - xbar;
        sxx += weights[i] * dx * dx;
        sxy += weights[i] * dx * (ys[i] - ybar);
    }
    // Scale-aware singularity guard: all weighted xs effectively equal.
    let xscale: f64 = xs.iter().map(|x| x.abs()).fold(1.0, f64::max);
    if sxx <= 1e-24 * wsum * xscale * xscale {
        return Err(DspError::SingularFit);
    }
    let slope = sxy / sxx;
    Ok((slope, ybar - slope * xbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn unit_slope_through_origin() {
        let (a, b) = wls_line_fit(&[-1.0, 1.0], &[-1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert!((a - 1.0).abs() < 1e-14);
        assert!(b.abs() < 1e-14);
    }

    #[test]
    fn flat_line() {
        let (a, b) = wls_line_fit(&[0.0, 1.0, 2.0], &[3.0, 3.0, 3.0], &[1.0, 1.0, 1.0]).unwrap();
        assert!(a.abs() < 1e-14);
        assert!((b - 3.0).abs() < 1e-14);
    }

    /// Closed-form normal equations, assembled independently of the
    /// centered-form implementation above.
    fn normal_equation_fit(xs: &[f64], ys: &[f64], ws: &[f64]) -> (f64, f64) {
        let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..xs.len() {
            sw += ws[i];
            sx += ws[i] * xs[i];
            sy += ws[i] * ys[i];
            sxx += ws[i] * xs[i] * xs[i];
            sxy += ws[i] * xs[i] * ys[i];
        }
        let det = sw * sxx - sx * sx;
        let slope = (sw * sxy - sx * sy) / det;
        let intercept = (sxx * sy - sx * sxy) / det;
        (slope, intercept)
    }

    #[test]
    fn matches_normal_equation_oracle() {
        let mut rng = SeededRng::new(11, 0);
        for _ in 0..50 {
            let xs: Vec<f64> = (0..8).map(|i| i as f64 + rng.uniform(-0.3, 0.3)).collect();
            let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0 + rng.gaussian()).collect();
            let ws: Vec<f64> = (0..8).map(|_| rng.uniform(0.1, 2.0)).collect();
            let (a, b) = wls_line_fit(&xs, &ys, &ws).unwrap();
            let (ao, bo) = normal_equation_fit(&xs, &ys, &ws);
            assert!((a - ao).abs() < 1e-10);
            assert!((b - bo).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_abscissae_rejected() {
        let r = wls_line_fit(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        assert_eq!(r, Err(DspError::SingularFit));
        // Distinct xs but only one carries weight.
        let r = wls_line_fit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], &[1.0, 0.0, 0.0]);
        assert_eq!(r, Err(DspError::SingularFit));
    }
}
