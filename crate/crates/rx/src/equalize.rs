//! MMSE equalization with the tracked CPE/SRO correction folded into the
//! effective channel, plus the hard demapper.

use crate::estimate::ChannelEstimate;
use axphy_core::Cx;
use axphy_frame::ofdm::FrequencyGrid;
use axphy_frame::plan::{FFT_SIZE, SAMPLE_PERIOD_S, TonePlan};
use axphy_frame::qam;

/// One equalized DATA symbol: the 234 estimated constellation points and
/// the effective per-tone channel used for soft-demapping reliabilities.
#[derive(Debug, Clone)]
pub struct EqualizedSymbol {
    pub points: Vec<Cx>,
    pub h_eff: Vec<Cx>,
    /// Tones where sigma^2 = 0 met a zero channel estimate; their output
    /// is defined as 0.
    pub flagged: usize,
}

/// x_hat[k] = C_eq[k] y[k] with
/// C_cpesro[k] = exp(j 2 pi tau k / (N Ts)) exp(j omega),
/// h_D[k] = h_T[k] conj(C_cpesro[k]),
/// C_eq[k] = conj(h_D[k]) / (|h_D[k]|^2 + sigma^2).
pub fn mmse_equalize(
    rx_symbol: &FrequencyGrid,
    est: &ChannelEstimate,
    omega_hat: f64,
    tau_hat_s: f64,
    plan: &TonePlan,
) -> EqualizedSymbol {
    let mut points = Vec::with_capacity(plan.data_tones.len());
    let mut h_eff = Vec::with_capacity(plan.data_tones.len());
    let mut flagged = 0;
    for &k in &plan.data_tones {
        let ramp = 2.0 * std::f64::consts::PI * tau_hat_s * k as f64
            / (FFT_SIZE as f64 * SAMPLE_PERIOD_S);
        let c_cpesro = Cx::from_polar(1.0, ramp + omega_hat);
        let h_d = est.at(k, plan) * c_cpesro.conj();
        let denom = h_d.norm_sqr() + est.sigma2;
        let x_hat = if denom > 0.0 {
            h_d.conj() / denom * rx_symbol.tone(k)
        } else {
            flagged += 1;
            Cx::new(0.0, 0.0)
        };
        points.push(x_hat);
        h_eff.push(h_d);
    }
    EqualizedSymbol {
        points,
        h_eff,
        flagged,
    }
}

/// Nearest-point Gray bit recovery over a whole symbol.
pub fn hard_demap(points: &[Cx], order: usize) -> Vec<u8> {
    let mut bits = Vec::with_capacity(points.len() * order.trailing_zeros() as usize);
    for &p in points {
        bits.extend(qam::demap(p, order).expect("supported order"));
    }
    bits
}
