//! The benchmark receiver chain: L-LTF noise variance estimation, LS
//! channel estimation (raw, frequency-smoothed or time-domain), joint
//! CPE/SRO pilot tracking, and MMSE equalization.

pub mod equalize;
pub mod estimate;
pub mod noise;
pub mod pipeline;
pub mod track;

pub use equalize::{hard_demap, mmse_equalize, EqualizedSymbol};
pub use estimate::{ls_channel_estimate, smooth_frequency, time_domain_ls_estimate, ChannelEstimate, EstimatorMethod};
pub use noise::estimate_noise_variance;
pub use pipeline::{ConventionalReceiver, GenieReceiver, ProcessedPacket, ReceiverConfig};
pub use track::CpeSroTracker;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RxError {
    #[error("fewer than two usable pilots for CPE/SRO tracking")]
    Tracking,
    #[error("ill-conditioned normal matrix (condition estimate {0:.3e})")]
    IllConditioned(f64),
    #[error("even smoothing span {0}")]
    EvenSpan(usize),
    #[error("smoothing span {0} out of range 1..=31")]
    SpanRange(usize),
    #[error("time-domain tap count {0} out of range 1..=16")]
    TapRange(usize),
    #[error(transparent)]
    Frame(#[from] axphy_frame::FrameError),
}

pub type Result<T> = std::result::Result<T, RxError>;
