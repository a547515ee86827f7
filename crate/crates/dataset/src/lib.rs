//! Synthetic dataset machinery: the end-to-end packet simulator, the
//! self-describing shard format, scaled composition plans, generation,
//! streaming reads and summary statistics.

pub mod generate;
pub mod shard;
pub mod sim;
pub mod spec;
pub mod stats;

pub use generate::generate;
pub use shard::{ShardReader, ShardSet, SymbolRecord};
pub use sim::{simulate_packet, PacketSimConfig};
pub use spec::{DatasetSpec, McsPlan, SnrQuota};
pub use stats::{dataset_stats, stats_to_csv, StatsRow};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("shard {path}: {reason}")]
    Format { path: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Neural(#[from] axphy_neural::NeuralError),
    #[error(transparent)]
    Frame(#[from] axphy_frame::FrameError),
    #[error(transparent)]
    Fec(#[from] axphy_fec::FecError),
}

impl DatasetError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        DatasetError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn format(path: &std::path::Path, reason: impl Into<String>) -> Self {
        DatasetError::Format {
            path: path.display().to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, DatasetError>;
