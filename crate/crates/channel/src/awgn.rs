//! AWGN injection at a calibrated receiver SNR.

use axphy_core::{rng::SeededRng, Cx};

/// Add circularly-symmetric complex Gaussian noise with per-sample variance
/// `signal_power_ref / 10^(snr_db/10)`. `+inf` adds nothing. Returns the
/// noisy buffer and the applied noise variance.
pub fn add_awgn(
    x: &[Cx],
    snr_db: f64,
    signal_power_ref: f64,
    rng: &mut SeededRng,
) -> (Vec<Cx>, f64) {
    if snr_db.is_infinite() && snr_db > 0.0 {
        return (x.to_vec(), 0.0);
    }
    let sigma2 = signal_power_ref / 10f64.powf(snr_db / 10.0);
    let y = x
        .iter()
        .map(|&v| v + rng.complex_gaussian(sigma2))
        .collect();
    (y, sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_snr_is_transparent() {
        let x = vec![Cx::new(1.0, -2.0); 16];
        let mut rng = SeededRng::new(0, 0);
        let (y, s2) = add_awgn(&x, f64::INFINITY, 1.0, &mut rng);
        assert_eq!(x, y);
        assert_eq!(s2, 0.0);
    }

    #[test]
    fn zero_db_noise_power_is_one() {
        let x = vec![Cx::new(0.0, 0.0); 1_000_000];
        let mut rng = SeededRng::new(1, 0);
        let (y, s2) = add_awgn(&x, 0.0, 1.0, &mut rng);
        assert_eq!(s2, 1.0);
        let p: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>() / y.len() as f64;
        assert!((p - 1.0).abs() < 0.01, "empirical noise power {p}");
    }

    #[test]
    fn thirty_db_within_tenth_db() {
        // A full packet worth of unit-power samples.
        let mut rng = SeededRng::new(2, 0);
        let x: Vec<Cx> = (0..35_248).map(|_| rng.complex_gaussian(1.0)).collect();
        let pref = axphy_core::mean_power(&x);
        let (y, _) = add_awgn(&x, 30.0, pref, &mut rng);
        let noise_p: f64 = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / x.len() as f64;
        let snr = 10.0 * (pref / noise_p).log10();
        assert!((snr - 30.0).abs() < 0.1, "measured snr {snr}");
    }
}
