//! Modulation and coding scheme table for the single-spatial-stream mode.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeRate {
    R34,
    R56,
}

impl CodeRate {
    pub fn as_f64(self) -> f64 {
        match self {
            CodeRate::R34 => 3.0 / 4.0,
            CodeRate::R56 => 5.0 / 6.0,
        }
    }
}

/// Supported schemes. `BpskDebug` is a loopback aid, not a standard entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mcs {
    BpskDebug,
    Mcs7,
    Mcs8,
    Mcs9,
    Mcs10,
}

impl Mcs {
    pub fn from_index(idx: u8) -> Option<Self> {
        match idx {
            0 => Some(Mcs::BpskDebug),
            7 => Some(Mcs::Mcs7),
            8 => Some(Mcs::Mcs8),
            9 => Some(Mcs::Mcs9),
            10 => Some(Mcs::Mcs10),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Mcs::BpskDebug => 0,
            Mcs::Mcs7 => 7,
            Mcs::Mcs8 => 8,
            Mcs::Mcs9 => 9,
            Mcs::Mcs10 => 10,
        }
    }

    /// QAM order.
    pub fn order(self) -> usize {
        match self {
            Mcs::BpskDebug => 2,
            Mcs::Mcs7 => 64,
            Mcs::Mcs8 | Mcs::Mcs9 => 256,
            Mcs::Mcs10 => 1024,
        }
    }

    pub fn bits_per_tone(self) -> usize {
        self.order().trailing_zeros() as usize
    }

    pub fn rate(self) -> CodeRate {
        match self {
            Mcs::BpskDebug | Mcs::Mcs7 | Mcs::Mcs9 => CodeRate::R56,
            Mcs::Mcs8 | Mcs::Mcs10 => CodeRate::R34,
        }
    }

    /// Coded bits carried by one OFDM symbol (234 data tones).
    pub fn coded_bits_per_symbol(self) -> usize {
        234 * self.bits_per_tone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        assert_eq!(Mcs::Mcs7.order(), 64);
        assert_eq!(Mcs::Mcs7.rate(), CodeRate::R56);
        assert_eq!(Mcs::Mcs8.order(), 256);
        assert_eq!(Mcs::Mcs8.rate(), CodeRate::R34);
        assert_eq!(Mcs::Mcs9.rate(), CodeRate::R56);
        assert_eq!(Mcs::Mcs10.order(), 1024);
        assert_eq!(Mcs::Mcs7.coded_bits_per_symbol(), 1404);
        assert_eq!(Mcs::Mcs8.coded_bits_per_symbol(), 1872);
        assert_eq!(Mcs::Mcs10.coded_bits_per_symbol(), 2340);
    }
}
