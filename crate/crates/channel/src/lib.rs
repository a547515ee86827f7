//! Propagation and radio-frequency front-end effects: tapped-delay-line
//! indoor channel models a-f, calibrated AWGN, and the impairment chains
//! (analog filtering, sample clock offset, residual CFO, phase noise,
//! PA nonlinearity) applied per packet with full genie bookkeeping.

pub mod awgn;
pub mod capture;
pub mod impairment;
pub mod model;

pub use awgn::add_awgn;
pub use capture::{GenieMeta, RxCapture};
pub use impairment::{GenieOffsets, ImpairmentConfig, ImpairmentType};
pub use model::{apply_channel, draw_channel, ChannelModelId, ChannelModelSpec, ChannelRealization};
