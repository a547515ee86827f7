//! Joint CPE/SRO tracking from pilot phases.
//!
//! Per symbol, the pilot phase residuals theta_p = arg(y x* h*) follow
//! theta(k) = -2 pi tau k / (N Ts) - omega. After unwrapping across the
//! ordered pilot indices, a |h|^2-weighted line fit gives the per-symbol
//! CPE from the intercept and a timing-offset candidate from the slope.
//! The timing drift rate is physically constant over a packet, so it is
//! tracked cumulatively across symbols: a least-squares fit of the
//! per-symbol timing offsets against their elapsed times (through the
//! origin), which weights later symbols' better-conditioned observations
//! by dt^2. The CPE is kept per symbol.

use crate::estimate::ChannelEstimate;
use crate::{Result, RxError};
use axphy_core::fit::wls_line_fit;
use axphy_core::Cx;
use axphy_frame::ofdm::FrequencyGrid;
use axphy_frame::plan::{FFT_SIZE, SAMPLE_PERIOD_S, TonePlan};

const PILOT_MIN_MAG: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct CpeSroTracker {
    /// CPE of the most recent symbol, wrapped to (-pi, pi].
    pub omega_hat: f64,
    /// Timing offset of the most recent symbol, seconds.
    pub tau_hat_s: f64,
    /// Cumulative drift ratio estimate (dimensionless).
    pub sro_ratio_hat: f64,
    symbols_tracked: usize,
    tau_dt_sum: f64,
    dt_sq_sum: f64,
    /// (omega_hat, tau_hat_s) per tracked symbol.
    pub history: Vec<(f64, f64)>,
}

impl CpeSroTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Track one DATA symbol. `dt_s` is the elapsed time between the
    /// HE-LTF FFT window and this symbol's, which anchors the rate update.
    pub fn update(
        &mut self,
        rx_symbol: &FrequencyGrid,
        est: &ChannelEstimate,
        tx_pilots: &[Cx; 8],
        dt_s: f64,
        plan: &TonePlan,
    ) -> Result<()> {
        let mut ks = Vec::with_capacity(8);
        let mut thetas = Vec::with_capacity(8);
        let mut weights = Vec::with_capacity(8);
        let mut prev_usable: Option<f64> = None;
        for (p, &k) in plan.pilot_tones.iter().enumerate() {
            let h = est.at(k, plan);
            let w = if h.norm() < PILOT_MIN_MAG {
                0.0
            } else {
                h.norm_sqr()
            };
            let raw = (rx_symbol.tone(k) * tx_pilots[p].conj() * h.conj()).arg();
            // Unwrap against the previous usable pilot.
            let theta = match prev_usable {
                Some(prev) if w > 0.0 => {
                    let two_pi = 2.0 * std::f64::consts::PI;
                    raw - two_pi * ((raw - prev) / two_pi).round()
                }
                _ => raw,
            };
            if w > 0.0 {
                prev_usable = Some(theta);
            }
            ks.push(k as f64);
            thetas.push(theta);
            weights.push(w);
        }
        if weights.iter().filter(|&&w| w > 0.0).count() < 2 {
            return Err(RxError::Tracking);
        }
        let (slope, intercept) =
            wls_line_fit(&ks, &thetas, &weights).map_err(|_| RxError::Tracking)?;
        // theta(k) = -2 pi tau k/(N Ts) - omega.
        let tau = -slope * FFT_SIZE as f64 * SAMPLE_PERIOD_S / (2.0 * std::f64::consts::PI);
        let omega = wrap_pi(-intercept);
        if dt_s > 0.0 {
            self.tau_dt_sum += tau * dt_s;
            self.dt_sq_sum += dt_s * dt_s;
            self.symbols_tracked += 1;
            self.sro_ratio_hat = self.tau_dt_sum / self.dt_sq_sum;
        }
        self.omega_hat = omega;
        self.tau_hat_s = self.sro_ratio_hat * dt_s;
        self.history.push((omega, self.tau_hat_s));
        Ok(())
    }
}

fn wrap_pi(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut v = x % two_pi;
    if v > std::f64::consts::PI {
        v -= two_pi;
    } else if v <= -std::f64::consts::PI {
        v += two_pi;
    }
    v
}
