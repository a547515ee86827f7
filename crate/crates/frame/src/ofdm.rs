//! OFDM symbol (de)modulation with unitary scaling, so tone amplitudes and
//! per-tone noise variance survive the transform unchanged in both the
//! 64-point legacy field and the 256-point HE fields.

use crate::plan::{CP_LEN, FFT_SIZE, SYMBOL_LEN};
use crate::{FrameError, Result, TonePlan};
use axphy_core::{fft, Cx};

/// One OFDM symbol in the frequency domain, indexed by FFT bin.
#[derive(Debug, Clone)]
pub struct FrequencyGrid {
    pub bins: Vec<Cx>,
}

impl FrequencyGrid {
    pub fn new(fft_size: usize) -> Self {
        Self {
            bins: vec![Cx::new(0.0, 0.0); fft_size],
        }
    }

    pub fn set_tone(&mut self, k: i32, v: Cx) {
        let n = self.bins.len();
        self.bins[(k.rem_euclid(n as i32)) as usize] = v;
    }

    pub fn tone(&self, k: i32) -> Cx {
        let n = self.bins.len();
        self.bins[(k.rem_euclid(n as i32)) as usize]
    }

    /// Values at the given signed tone indices, in their order.
    pub fn tones(&self, ks: &[i32]) -> Vec<Cx> {
        ks.iter().map(|&k| self.tone(k)).collect()
    }
}

/// Unitary IFFT plus cyclic prefix.
pub fn modulate(bins: &[Cx], cp_len: usize) -> Result<Vec<Cx>> {
    let n = bins.len();
    let scale = (n as f64).sqrt();
    let body: Vec<Cx> = fft::ifft(bins, n)?.into_iter().map(|v| v * scale).collect();
    let mut out = Vec::with_capacity(cp_len + n);
    out.extend_from_slice(&body[n - cp_len..]);
    out.extend_from_slice(&body);
    Ok(out)
}

/// Unitary FFT of one CP-free window.
pub fn demodulate_window(samples: &[Cx], fft_size: usize) -> Result<Vec<Cx>> {
    let scale = 1.0 / (fft_size as f64).sqrt();
    Ok(fft::fft(samples, fft_size)?
        .into_iter()
        .map(|v| v * scale)
        .collect())
}

/// Drop the cyclic prefix of one DATA/HE-LTF symbol and transform it.
pub fn demodulate_symbol(time_samples: &[Cx], _plan: &TonePlan) -> Result<FrequencyGrid> {
    if time_samples.len() != SYMBOL_LEN {
        return Err(FrameError::SymbolLength {
            expected: SYMBOL_LEN,
            got: time_samples.len(),
        });
    }
    let bins = demodulate_window(&time_samples[CP_LEN..], FFT_SIZE)?;
    Ok(FrequencyGrid { bins })
}

/// Modulate one DATA-field grid (256-point, 16-sample CP).
pub fn modulate_symbol(grid: &FrequencyGrid) -> Result<Vec<Cx>> {
    modulate(&grid.bins, CP_LEN)
}
