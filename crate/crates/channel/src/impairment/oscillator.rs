//! Residual carrier offset and oscillator phase noise.
//!
//! The sample stream is rotated by exp(j(2 pi df n Ts + phi[n])) where
//! phi is a first-order autoregressive walk whose PSD is single-pole with
//! the configured corner frequency and dBc/Hz level at DC. The genie
//! records each DATA symbol's mean phase relative to the HE-LTF window,
//! negated to match the receiver's phase-model sign convention
//! (h_D = h_T * exp(-j omega)).

use axphy_core::rng::SeededRng;
use axphy_core::Cx;
use axphy_frame::plan::SAMPLE_PERIOD_S;
use axphy_frame::FrameLayout;

/// Apply CFO and phase noise; returns the rotated samples and the genie
/// per-symbol CPE values.
pub fn apply_cfo_and_phase_noise(
    x: &[Cx],
    cfo_hz: f64,
    pn_level_dbchz: f64,
    pn_corner_hz: f64,
    layout: &FrameLayout,
    rng: &mut SeededRng,
) -> (Vec<Cx>, Vec<f64>) {
    let n = x.len();
    let mut phase = vec![0.0f64; n];
    if pn_level_dbchz.is_finite() {
        let a = (-2.0 * std::f64::consts::PI * pn_corner_hz * SAMPLE_PERIOD_S).exp();
        let s0 = 10f64.powf(pn_level_dbchz / 10.0);
        let w_var = s0 * (1.0 - a) * (1.0 - a) / SAMPLE_PERIOD_S;
        let w_std = w_var.sqrt();
        let stat_std = (w_var / (1.0 - a * a)).sqrt();
        let mut phi = stat_std * rng.gaussian();
        for p in phase.iter_mut() {
            *p = phi;
            phi = a * phi + w_std * rng.gaussian();
        }
    }
    let w = 2.0 * std::f64::consts::PI * cfo_hz * SAMPLE_PERIOD_S;
    let mut out = Vec::with_capacity(n);
    for (i, &v) in x.iter().enumerate() {
        let theta = w * i as f64 + phase[i];
        out.push(v * Cx::from_polar(1.0, theta));
    }

    // Genie CPE per DATA symbol: mean applied phase over the symbol's FFT
    // window minus the HE-LTF window's, negated into the receiver's
    // convention.
    let mean_phase = |start: usize, len: usize| -> f64 {
        let mut acc = 0.0;
        for i in start..(start + len).min(n) {
            acc += w * i as f64 + phase[i];
        }
        acc / len as f64
    };
    let fft_len = axphy_frame::plan::FFT_SIZE;
    let ref_phase = mean_phase(layout.heltf_window_start(), fft_len);
    let cpe = (0..layout.n_data_symbols)
        .map(|m| -(mean_phase(layout.data_window_start(m), fft_len) - ref_phase))
        .collect();
    (out, cpe)
}
