//! Wilson score intervals for error-rate points.

/// 95% Wilson interval: returns (center-free point estimate, half-width).
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 0.0);
    }
    let z = 1.959963984540054f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (p, half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_and_midpoint() {
        assert_eq!(wilson(0, 0), (0.0, 0.0));
        let (p, h) = wilson(50, 100);
        assert!((p - 0.5).abs() < 1e-12);
        // Known value: half-width ~ 0.0955 at n=100, p=0.5.
        assert!((h - 0.0955).abs() < 2e-3, "half {h}");
    }

    #[test]
    fn zero_successes_still_has_width() {
        let (p, h) = wilson(0, 100);
        assert_eq!(p, 0.0);
        assert!(h > 0.0 && h < 0.05);
    }
}
