//! Forward error correction for the simulated link: 1944-bit quasi-cyclic
//! LDPC codes (Z = 81) at rates 3/4 and 5/6 with systematic dual-diagonal
//! encoding, a plain min-sum decoder, a max-log soft demapper, and the
//! payload segmentation that fills a packet's data tones.

pub mod code;
pub mod llr;
pub mod minsum;
pub mod segment;

pub use code::LdpcCode;
pub use llr::soft_demap;
pub use minsum::ldpc_decode_minsum;
pub use segment::{coded_bits_for, segment_and_pad, SegmentPlan};

use thiserror::Error;

/// Input LLRs are clamped to this magnitude for numerical stability at
/// very high SNR.
pub const LLR_CLIP: f64 = 40.0;

#[derive(Debug, Error)]
pub enum FecError {
    #[error("info length {got}, code expects {expected}")]
    InfoLength { expected: usize, got: usize },
    #[error("llr length {got}, code expects {expected}")]
    LlrLength { expected: usize, got: usize },
    #[error("payload of {got} bits exceeds capacity {capacity}")]
    PayloadTooLong { capacity: usize, got: usize },
    #[error("bad prototype matrix: {0}")]
    BadMatrix(String),
}

pub type Result<T> = std::result::Result<T, FecError>;
