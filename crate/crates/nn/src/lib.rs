//! Dense networks with tanh hidden layers and a linear output, trained in
//! 64-bit floats with reverse-mode gradients and Adam. Small by design:
//! the receiver's sub-networks are plain MLPs and train on one thread
//! each, so the hot paths are straightforward row-major loops.

pub mod io;
pub mod net;

pub use net::{DenseNet, Gradients};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("input width {got}, expected {expected}")]
    InputWidth { expected: usize, got: usize },
    #[error("target width {got}, expected {expected}")]
    TargetWidth { expected: usize, got: usize },
    #[error("weight file {path}: {reason}")]
    BadWeightFile { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, NnError>;
