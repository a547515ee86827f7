//! Simplified HE single-user packet construction and OFDM (de)modulation
//! for the 20 MHz single-spatial-stream mode: 256-point tone plan with
//! 234 data + 8 pilot tones, legacy and HE long training fields, pilot
//! polarity sequencing and full packet assembly.

pub mod constants;
pub mod ltf;
pub mod mcs;
pub mod ofdm;
pub mod packet;
pub mod pilot;
pub mod plan;
pub mod qam;

pub use mcs::{CodeRate, Mcs};
pub use ofdm::FrequencyGrid;
pub use packet::{FrameLayout, HesuPacket};
pub use plan::TonePlan;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("unsupported QAM order {0}")]
    UnsupportedOrder(usize),
    #[error("bit group length {got} does not match log2(order) = {expected}")]
    BitGroupLength { expected: usize, got: usize },
    #[error("payload length {got} does not match required {expected} coded bits")]
    PayloadLength { expected: usize, got: usize },
    #[error("time-domain symbol length {got}, expected {expected}")]
    SymbolLength { expected: usize, got: usize },
    #[error(transparent)]
    Dsp(#[from] axphy_core::DspError),
}

pub type Result<T> = std::result::Result<T, FrameError>;
