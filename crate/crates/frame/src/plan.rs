//! 20 MHz tone plan: 256-point FFT, 242 active tones split into 234 data
//! and 8 pilots, the rest null (DC) or guard.

use serde::{Deserialize, Serialize};

/// Sample period at 20 MHz.
pub const SAMPLE_PERIOD_S: f64 = 50e-9;
/// Data-field FFT size.
pub const FFT_SIZE: usize = 256;
/// Cyclic prefix of HE-LTF and DATA symbols (0.8 us guard interval).
pub const CP_LEN: usize = 16;
/// Samples per HE-LTF or DATA symbol including its cyclic prefix.
pub const SYMBOL_LEN: usize = CP_LEN + FFT_SIZE;

/// Pilot tone indices relative to DC. Fixed, symmetric, disjoint from the
/// guard/DC sets; pinned here because only the counts are standardized in
/// the simplified frame.
pub const PILOT_TONES: [i32; 8] = [-116, -90, -48, -22, 22, 48, 90, 116];

/// Role of one FFT bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToneRole {
    Data,
    Pilot,
    Null,
}

/// Tone plan for the 242-tone single-user allocation.
#[derive(Debug, Clone)]
pub struct TonePlan {
    /// Signed tone indices of the 234 data tones, ascending.
    pub data_tones: Vec<i32>,
    /// Signed tone indices of the 8 pilot tones, ascending.
    pub pilot_tones: Vec<i32>,
    /// Signed tone indices of all 242 active tones, ascending.
    pub active_tones: Vec<i32>,
}

impl Default for TonePlan {
    fn default() -> Self {
        Self::new()
    }
}

impl TonePlan {
    pub fn new() -> Self {
        // Active range -122..=-2 and 2..=122; +-123..128 guard, -1..1 DC.
        let active: Vec<i32> = (-122..=-2).chain(2..=122).collect();
        let pilots = PILOT_TONES.to_vec();
        let data: Vec<i32> = active
            .iter()
            .copied()
            .filter(|k| !pilots.contains(k))
            .collect();
        Self {
            data_tones: data,
            pilot_tones: pilots,
            active_tones: active,
        }
    }

    pub fn subcarrier_spacing_hz(&self) -> f64 {
        1.0 / (FFT_SIZE as f64 * SAMPLE_PERIOD_S)
    }

    /// Map a signed tone index to its FFT bin.
    pub fn bin(k: i32) -> usize {
        (k.rem_euclid(FFT_SIZE as i32)) as usize
    }

    pub fn role(&self, k: i32) -> ToneRole {
        if self.pilot_tones.contains(&k) {
            ToneRole::Pilot
        } else if self.data_tones.binary_search(&k).is_ok() {
            ToneRole::Data
        } else {
            ToneRole::Null
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_partition_the_fft() {
        let plan = TonePlan::new();
        assert_eq!(plan.data_tones.len(), 234);
        assert_eq!(plan.pilot_tones.len(), 8);
        assert_eq!(plan.active_tones.len(), 242);
        // Disjoint and inside the active set.
        for p in &plan.pilot_tones {
            assert!(!plan.data_tones.contains(p));
            assert!(plan.active_tones.contains(p));
        }
        // Remaining bins are null/guard/DC: 256 - 242 = 14.
        let inactive = (0..256)
            .filter(|&b| {
                let k = if b >= 128 { b as i32 - 256 } else { b as i32 };
                !plan.active_tones.contains(&k)
            })
            .count();
        assert_eq!(inactive, 14);
    }

    #[test]
    fn spacing_is_78_125_khz() {
        let plan = TonePlan::new();
        assert!((plan.subcarrier_spacing_hz() - 78_125.0).abs() < 1e-6);
    }

    #[test]
    fn bin_mapping_wraps_negatives() {
        assert_eq!(TonePlan::bin(0), 0);
        assert_eq!(TonePlan::bin(122), 122);
        assert_eq!(TonePlan::bin(-1), 255);
        assert_eq!(TonePlan::bin(-122), 134);
    }
}
