//! Noise variance from the two identical L-LTF repetitions: the channel
//! cancels in their difference, leaving pure noise.

use axphy_core::Cx;
use axphy_frame::ltf::{lltf_tones, LLTF_FFT};
use axphy_frame::ofdm::demodulate_window;

/// sigma^2 estimate over the 52 active legacy tones:
/// (1 / (2 * 52)) * sum |Y1[k] - Y2[k]|^2.
pub fn estimate_noise_variance(rx_lltf: &[Cx]) -> f64 {
    debug_assert!(rx_lltf.len() >= 160);
    let y1 = demodulate_window(&rx_lltf[32..96], LLTF_FFT).expect("64-point window");
    let y2 = demodulate_window(&rx_lltf[96..160], LLTF_FFT).expect("64-point window");
    let mut acc = 0.0;
    let tones = lltf_tones();
    for &k in &tones {
        let bin = (k.rem_euclid(LLTF_FFT as i32)) as usize;
        acc += (y1[bin] - y2[bin]).norm_sqr();
    }
    acc / (2.0 * tones.len() as f64)
}
