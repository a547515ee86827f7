//! Evaluation engine: regenerates fresh packets, runs them through a
//! receiver, and accumulates Pre-FEC BER and Post-FEC PER with Wilson
//! confidence intervals, plus curve comparison and a fast self test.

pub mod compare;
pub mod eval;
pub mod receiver;
pub mod selftest;
pub mod stats_util;

pub use compare::{compare_curves, GainRow, Metric};
pub use eval::{evaluate, EvalPoint, EvalSpec};
pub use receiver::{decode_packet, PacketOutcome, Receiver};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("comparison: {0}")]
    Compare(String),
    #[error(transparent)]
    Rx(#[from] axphy_rx::RxError),
    #[error(transparent)]
    Dataset(#[from] axphy_dataset::DatasetError),
    #[error(transparent)]
    Neural(#[from] axphy_neural::NeuralError),
    #[error(transparent)]
    Fec(#[from] axphy_fec::FecError),
    #[error(transparent)]
    Frame(#[from] axphy_frame::FrameError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
