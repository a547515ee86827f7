//! Pilot values per OFDM symbol: a fixed base pattern on the 8 pilot tones
//! multiplied by the polarity sequence p[(m + Z0) mod 127] generated by the
//! x^7 + x^4 + 1 LFSR from the all-ones state.

use axphy_core::Cx;

/// Base +-1 pilot pattern, one entry per pilot tone in ascending tone order.
pub const PILOT_BASE: [f64; 8] = [1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0, -1.0];

/// Offset into the polarity sequence applied to the first DATA symbol.
pub const POLARITY_OFFSET: usize = 3;

/// The 127-entry +-1 polarity sequence (LFSR output bit 0 -> +1, 1 -> -1).
pub fn polarity_sequence() -> [f64; 127] {
    let mut state: u8 = 0x7F; // seven ones
    let mut out = [0.0; 127];
    for v in out.iter_mut() {
        // x^7 + x^4 + 1: feedback from positions 7 and 4.
        let bit = ((state >> 6) ^ (state >> 3)) & 1;
        *v = if bit == 0 { 1.0 } else { -1.0 };
        state = ((state << 1) | bit) & 0x7F;
    }
    out
}

/// Pilot values for DATA symbol `m`.
pub fn pilot_sequence(m: usize) -> [Cx; 8] {
    let seq = polarity_sequence();
    let p = seq[(m + POLARITY_OFFSET) % 127];
    let mut out = [Cx::new(0.0, 0.0); 8];
    for (o, b) in out.iter_mut().zip(PILOT_BASE.iter()) {
        *o = Cx::new(b * p, 0.0);
    }
    out
}
