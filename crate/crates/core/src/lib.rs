//! Deterministic numerical substrate shared by the whole workspace:
//! complex sample buffers, a radix-2 FFT, counter-based seeded random
//! streams, weighted line fits and field normalization.
//!
//! Everything here is pure, value-semantic and reproducible bit-for-bit
//! for a given seed, so packets can be simulated in parallel and replayed.

pub mod fft;
pub mod field;
pub mod fit;
pub mod par;
pub mod rng;

use thiserror::Error;

/// Complex baseband sample, 64-bit throughout.
pub type Cx = num_complex::Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum DspError {
    #[error("buffer length {got} does not match required size {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("FFT size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("singular line fit: fewer than two distinct abscissae with positive weight")]
    SingularFit,
}

pub type Result<T> = std::result::Result<T, DspError>;

/// True when every entry is finite in both components.
pub fn all_finite(x: &[Cx]) -> bool {
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// Mean |x|^2 over the buffer.
pub fn mean_power(x: &[Cx]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}
