//! Versioned JSON export of the frame constants (tone plan, pilot and LTF
//! sequences), embedded in dataset headers so shards are self-describing.

use crate::ltf::{heltf_sequence, HELTF_SEED, LLTF_SEQUENCE};
use crate::pilot::{PILOT_BASE, POLARITY_OFFSET};
use crate::plan::{CP_LEN, FFT_SIZE, SAMPLE_PERIOD_S, TonePlan};

pub const CONSTANTS_VERSION: u32 = 1;

pub fn export_json() -> serde_json::Value {
    let plan = TonePlan::new();
    let heltf: Vec<i8> = heltf_sequence(&plan)
        .iter()
        .map(|v| v.re as i8)
        .collect();
    serde_json::json!({
        "version": CONSTANTS_VERSION,
        "fft_size": FFT_SIZE,
        "cp_len": CP_LEN,
        "sample_period_s": SAMPLE_PERIOD_S,
        "data_tones": plan.data_tones,
        "pilot_tones": plan.pilot_tones,
        "pilot_base": PILOT_BASE,
        "pilot_polarity_offset": POLARITY_OFFSET,
        "lltf_sequence": LLTF_SEQUENCE.to_vec(),
        "heltf_seed": HELTF_SEED,
        "heltf_sequence": heltf,
    })
}
