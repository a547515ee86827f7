//! Analog front-end filtering and resampling.
//!
//! The converter chain runs at twice the baseband rate: the signal is
//! (ideally) resampled up, passed through a 63-tap Hamming-windowed sinc
//! lowpass with cutoff 0.45 of that rate, and resampled back. For a
//! band-limited baseband signal this composition is exactly a base-rate
//! spectral multiply by the filter's zero-phase amplitude at f/2, which is
//! how it is applied here: occupied tones see the passband ripple, the
//! converter-rate stopband suppresses out-of-band products, and group
//! delay is compensated exactly so genie timing holds.

use axphy_core::{fft, Cx};

pub const DEFAULT_TAPS: usize = 63;
/// Cutoff in cycles per sample at the filter's operating (2x) rate.
pub const DEFAULT_CUTOFF: f64 = 0.45;

/// Windowed-sinc lowpass prototype, normalized to unit DC gain.
pub fn design_lowpass(n_taps: usize, cutoff: f64) -> Vec<f64> {
    assert!(n_taps % 2 == 1, "odd tap count keeps the delay integral");
    let mid = (n_taps / 2) as f64;
    let mut taps: Vec<f64> = (0..n_taps)
        .map(|n| {
            let m = n as f64 - mid;
            let ideal = if m.abs() < 1e-12 {
                2.0 * cutoff
            } else {
                (2.0 * std::f64::consts::PI * cutoff * m).sin() / (std::f64::consts::PI * m)
            };
            let w = 0.54
                - 0.46 * (2.0 * std::f64::consts::PI * n as f64 / (n_taps as f64 - 1.0)).cos();
            ideal * w
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= dc;
    }
    taps
}

/// Complex gain of a tap set at `f` cycles per sample (at the rate the
/// taps operate on).
pub fn frequency_response(taps: &[f64], f: f64) -> Cx {
    let mid = (taps.len() / 2) as f64;
    taps.iter()
        .enumerate()
        .map(|(n, &t)| Cx::from_polar(t, -2.0 * std::f64::consts::PI * f * (n as f64 - mid)))
        .sum()
}

/// Zero-phase amplitude of a symmetric tap set at `f` (delay removed).
pub fn zero_phase_amplitude(taps: &[f64], f: f64) -> f64 {
    let mid = (taps.len() / 2) as f64;
    taps.iter()
        .enumerate()
        .map(|(n, &t)| t * (2.0 * std::f64::consts::PI * f * (n as f64 - mid)).cos())
        .sum()
}

/// Effective base-rate gain seen by a baseband frequency `f_base`
/// (cycles per base sample): the filter amplitude at `f_base / 2`.
pub fn base_rate_gain(taps: &[f64], f_base: f64) -> f64 {
    zero_phase_amplitude(taps, f_base / 2.0)
}

/// Apply the filtering/resampling impairment. Implemented as a spectral
/// multiply on a zero-padded FFT of the whole buffer.
pub fn apply_analog_filter(x: &[Cx], taps: &[f64]) -> Vec<Cx> {
    if x.is_empty() {
        return Vec::new();
    }
    let pad = (x.len() + 4 * taps.len()).next_power_of_two();
    let mut buf = x.to_vec();
    buf.resize(pad, Cx::new(0.0, 0.0));
    let mut spec = fft::fft(&buf, pad).expect("padded to a power of two");
    for (k, s) in spec.iter_mut().enumerate() {
        let f = if k <= pad / 2 {
            k as f64 / pad as f64
        } else {
            k as f64 / pad as f64 - 1.0
        };
        *s *= base_rate_gain(taps, f);
    }
    let mut y = fft::ifft(&spec, pad).expect("power of two");
    y.truncate(x.len());
    y
}
