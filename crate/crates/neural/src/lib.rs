//! The learned receiver. K = 234 data tones are split into M clusters of S
//! consecutive tones; each cluster owns two dense networks, one mimicking
//! the equalizer (fed the L-LTF and HE-LTF) and one mimicking CPE/SRO
//! correction (fed the training fields plus transmitted and received
//! pilots). The prediction for tone k is the product
//! C_eq[k] * C_cpesro[k] * y_D[k], trained against the true constellation
//! points with a per-cluster mean squared error.

pub mod bundle;
pub mod features;
pub mod model;
pub mod train;

pub use bundle::{load_bundle, save_bundle, BundleManifest};
pub use features::{extract_features, FeatureVector};
pub use model::{NeuralReceiver, SubModel, TrainExample};
pub use train::{train, BatchSource, SliceSource, TrainConfig, TrainReport};

use thiserror::Error;

pub const DATA_TONES: usize = 234;
/// Width of the averaged L-LTF feature (52 tones, re then im).
pub const LLTF_FEATURES: usize = 104;
/// Width of the HE-LTF feature (242 tones, re then im).
pub const HELTF_FEATURES: usize = 484;
/// Width of each pilot feature (8 pilots, re then im).
pub const PILOT_FEATURES: usize = 16;
/// Equalizer network input width.
pub const EQ_INPUT: usize = LLTF_FEATURES + HELTF_FEATURES;
/// CPE/SRO network input width.
pub const CPESRO_INPUT: usize = EQ_INPUT + 2 * PILOT_FEATURES;

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("cluster geometry {clusters} x {tones} != {expected} data tones")]
    ClusterGeometry {
        clusters: usize,
        tones: usize,
        expected: usize,
    },
    #[error("symbol index {got} out of range (< {n_symbols})")]
    SymbolIndex { got: usize, n_symbols: usize },
    #[error("empty training batch")]
    EmptyBatch,
    #[error("model expects MCS {expected:?}, dataset provides {got:?}")]
    McsMismatch {
        expected: axphy_frame::Mcs,
        got: axphy_frame::Mcs,
    },
    #[error("bundle: {0}")]
    Bundle(String),
    #[error(transparent)]
    Nn(#[from] axphy_nn::NnError),
    #[error(transparent)]
    Frame(#[from] axphy_frame::FrameError),
    #[error(transparent)]
    Dsp(#[from] axphy_core::DspError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, NeuralError>;
