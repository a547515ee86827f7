//! Packet-level receivers: the conventional chain in its three variants,
//! and the genie receiver that reads the simulation ground truth (used by
//! oracles and sanity tests only).

use crate::equalize::{mmse_equalize, EqualizedSymbol};
use crate::estimate::{ls_channel_estimate, smooth_frequency, time_domain_ls_estimate, ChannelEstimate, EstimatorMethod};
use crate::noise::estimate_noise_variance;
use crate::track::CpeSroTracker;
use crate::Result;
use axphy_channel::RxCapture;
use axphy_frame::ltf::heltf_sequence;
use axphy_frame::ofdm::demodulate_symbol;
use axphy_frame::pilot::pilot_sequence;
use axphy_frame::plan::{SAMPLE_PERIOD_S, TonePlan};
use serde::{Deserialize, Serialize};

/// Receiver variant, mirroring the three benchmark configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReceiverConfig {
    NoSmoothing,
    Smoothing { span: usize },
    TimeDomain { n_taps: usize },
}

impl ReceiverConfig {
    pub fn label(&self) -> String {
        match self {
            ReceiverConfig::NoSmoothing => "conv".into(),
            ReceiverConfig::Smoothing { span } => format!("conv-smooth{span}"),
            ReceiverConfig::TimeDomain { n_taps } => format!("conv-td{n_taps}"),
        }
    }
}

/// Equalized output for a whole packet.
#[derive(Debug, Clone)]
pub struct ProcessedPacket {
    pub symbols: Vec<EqualizedSymbol>,
    pub sigma2: f64,
    pub estimate: ChannelEstimate,
}

pub struct ConventionalReceiver {
    pub config: ReceiverConfig,
}

impl ConventionalReceiver {
    pub fn new(config: ReceiverConfig) -> Self {
        Self { config }
    }

    pub fn process(&self, capture: &RxCapture, plan: &TonePlan) -> Result<ProcessedPacket> {
        let sigma2 = estimate_noise_variance(capture.lltf());
        let heltf_grid = demodulate_symbol(capture.heltf(), plan)?;
        let known = heltf_sequence(plan);
        let mut est = match self.config {
            ReceiverConfig::NoSmoothing => ls_channel_estimate(&heltf_grid, &known, plan),
            ReceiverConfig::Smoothing { span } => {
                let raw = ls_channel_estimate(&heltf_grid, &known, plan);
                smooth_frequency(&raw, span, plan)?
            }
            ReceiverConfig::TimeDomain { n_taps } => {
                time_domain_ls_estimate(&heltf_grid, &known, n_taps, plan)?
            }
        };
        est.sigma2 = sigma2;

        let heltf_start = capture.layout.heltf_window_start();
        let mut tracker = CpeSroTracker::new();
        let mut symbols = Vec::with_capacity(capture.layout.n_data_symbols);
        for m in 0..capture.layout.n_data_symbols {
            let grid = demodulate_symbol(capture.data_symbol(m), plan)?;
            let dt = (capture.layout.data_window_start(m) - heltf_start) as f64 * SAMPLE_PERIOD_S;
            tracker.update(&grid, &est, &pilot_sequence(m), dt, plan)?;
            symbols.push(mmse_equalize(
                &grid,
                &est,
                tracker.omega_hat,
                tracker.tau_hat_s,
                plan,
            ));
        }
        Ok(ProcessedPacket {
            symbols,
            sigma2,
            estimate: est,
        })
    }
}

/// Oracle receiver fed with the true channel, offsets and noise variance.
pub struct GenieReceiver;

impl GenieReceiver {
    pub fn process(capture: &RxCapture, plan: &TonePlan) -> Result<ProcessedPacket> {
        let genie = &capture.genie;
        let h_hat = plan
            .active_tones
            .iter()
            .map(|&k| genie.channel.freq_response[TonePlan::bin(k)])
            .collect();
        let est = ChannelEstimate {
            h_hat,
            sigma2: genie.sigma2,
            method: EstimatorMethod::Ls,
        };
        let heltf_start = capture.layout.heltf_window_start();
        let mut symbols = Vec::with_capacity(capture.layout.n_data_symbols);
        for m in 0..capture.layout.n_data_symbols {
            let grid = demodulate_symbol(capture.data_symbol(m), plan)?;
            let dt = (capture.layout.data_window_start(m) - heltf_start) as f64 * SAMPLE_PERIOD_S;
            let omega = genie.offsets.cpe_per_symbol.get(m).copied().unwrap_or(0.0);
            let tau = genie.offsets.sro_ratio * dt;
            symbols.push(mmse_equalize(&grid, &est, omega, tau, plan));
        }
        Ok(ProcessedPacket {
            symbols,
            sigma2: genie.sigma2,
            estimate: est,
        })
    }
}
