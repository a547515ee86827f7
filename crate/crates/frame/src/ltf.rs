//! Long training fields. The legacy L-LTF is the fixed 52-tone +-1 sequence
//! on a 64-point grid, a 32-sample CP and two identical repetitions. The
//! HE-LTF is one 256-point symbol carrying a pinned +-1 sequence on all 242
//! active tones, generated once from a published seed so both ends agree.

use crate::ofdm;
use crate::plan::{CP_LEN, FFT_SIZE, TonePlan};
use axphy_core::rng::{stage, SeededRng};
use axphy_core::Cx;

/// Legacy L-LTF values for tones -26..=26 (DC at index 26 is zero).
pub const LLTF_SEQUENCE: [i8; 53] = [
    1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 0, 1,
    -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1,
];

pub const LLTF_FFT: usize = 64;
pub const LLTF_CP: usize = 32;
pub const LLTF_LEN: usize = LLTF_CP + 2 * LLTF_FFT;

/// Seed of the pinned HE-LTF sequence; part of the exported constants.
pub const HELTF_SEED: u64 = 0x0AE0_2026_0811_A0FE;

/// Signed tone indices of the 52 active legacy tones.
pub fn lltf_tones() -> Vec<i32> {
    (-26..=26).filter(|&k| k != 0).collect()
}

/// L-LTF value at signed tone `k` (zero off the active set).
pub fn lltf_value(k: i32) -> f64 {
    if !(-26..=26).contains(&k) {
        return 0.0;
    }
    LLTF_SEQUENCE[(k + 26) as usize] as f64
}

/// Time-domain L-LTF: CP plus two identical 64-sample training symbols.
pub fn build_lltf() -> Vec<Cx> {
    let mut bins = vec![Cx::new(0.0, 0.0); LLTF_FFT];
    for k in -26i32..=26 {
        bins[(k.rem_euclid(LLTF_FFT as i32)) as usize] = Cx::new(lltf_value(k), 0.0);
    }
    let with_cp = ofdm::modulate(&bins, LLTF_CP).expect("64 is a power of two");
    let body = &with_cp[LLTF_CP..];
    let mut out = Vec::with_capacity(LLTF_LEN);
    out.extend_from_slice(&with_cp[..LLTF_CP]);
    out.extend_from_slice(body);
    out.extend_from_slice(body);
    out
}

/// The pinned +-1 HE-LTF sequence over the 242 active tones, ascending.
pub fn heltf_sequence(plan: &TonePlan) -> Vec<Cx> {
    let mut rng = SeededRng::new(HELTF_SEED, stage::LTF);
    plan.active_tones
        .iter()
        .map(|_| Cx::new(if rng.bit() == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect()
}

/// Time-domain HE-LTF: 16-sample CP plus one 256-sample symbol.
pub fn build_heltf(plan: &TonePlan) -> Vec<Cx> {
    let seq = heltf_sequence(plan);
    let mut bins = vec![Cx::new(0.0, 0.0); FFT_SIZE];
    for (&k, &v) in plan.active_tones.iter().zip(seq.iter()) {
        bins[TonePlan::bin(k)] = v;
    }
    ofdm::modulate(&bins, CP_LEN).expect("256 is a power of two")
}
