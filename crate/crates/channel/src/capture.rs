//! A received packet: the time-domain sample stream plus the simulation
//! ground truth. The genie fields feed oracles and estimator unit tests;
//! receivers under test never read them.

use crate::impairment::{GenieOffsets, ImpairmentType};
use crate::model::{ChannelModelId, ChannelRealization};
use axphy_core::Cx;
use axphy_frame::{FrameLayout, Mcs};

#[derive(Debug, Clone)]
pub struct GenieMeta {
    pub snr_db: f64,
    /// Applied per-sample noise variance.
    pub sigma2: f64,
    /// Mean transmit sample power used as the SNR reference.
    pub signal_power_ref: f64,
    pub model: ChannelModelId,
    pub imp_type: ImpairmentType,
    pub mcs: Mcs,
    pub channel: ChannelRealization,
    pub offsets: GenieOffsets,
    pub master_seed: u64,
    pub packet_index: u64,
}

#[derive(Debug, Clone)]
pub struct RxCapture {
    pub samples: Vec<Cx>,
    pub layout: FrameLayout,
    pub genie: GenieMeta,
}

impl RxCapture {
    pub fn lltf(&self) -> &[Cx] {
        &self.samples[self.layout.lltf_range()]
    }

    pub fn heltf(&self) -> &[Cx] {
        &self.samples[self.layout.heltf_range()]
    }

    pub fn data_symbol(&self, m: usize) -> &[Cx] {
        &self.samples[self.layout.data_range(m)]
    }
}
