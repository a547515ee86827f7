//! Memoryless Rapp PA model, AM/AM only:
//! g(r) = r / (1 + (r/A_sat)^(2p))^(1/(2p)), phase preserved. The
//! saturation amplitude is set `backoff_db` above the mean input power.

use axphy_core::Cx;

pub fn apply_pa(x: &[Cx], backoff_db: f64, smoothness: f64) -> Vec<Cx> {
    assert!(smoothness > 0.0);
    if backoff_db.is_infinite() {
        return x.to_vec();
    }
    let mean_p = axphy_core::mean_power(x);
    if mean_p == 0.0 {
        return x.to_vec();
    }
    let a_sat_sq = mean_p * 10f64.powf(backoff_db / 10.0);
    let two_p = 2.0 * smoothness;
    x.iter()
        .map(|&v| {
            let ratio = (v.norm_sqr() / a_sat_sq).powf(smoothness);
            v / (1.0 + ratio).powf(1.0 / two_p)
        })
        .collect()
}
