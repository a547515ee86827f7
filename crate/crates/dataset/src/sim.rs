//! End-to-end packet simulation shared by dataset generation and the
//! evaluation harness: random payload, LDPC encoding, packet assembly,
//! transmit-side impairments, channel, receive-side impairments, AWGN.
//! Every random draw comes from a (master_seed, packet_index, stage)
//! stream, so any packet regenerates bit-exactly in isolation.

use crate::Result;
use axphy_channel::{
    add_awgn, apply_channel, draw_channel, impairment, ChannelModelId, ChannelModelSpec,
    ChannelRealization, GenieMeta, ImpairmentConfig, ImpairmentType, RxCapture,
};
use axphy_core::rng::{stage, SeededRng};
use axphy_fec::{segment_and_pad, LdpcCode, SegmentPlan};
use axphy_frame::packet::{assemble_packet, HesuPacket};
use axphy_frame::plan::TonePlan;
use axphy_frame::Mcs;
use serde::{Deserialize, Serialize};

/// Trailing idle samples simulated after the packet.
pub const TAIL_MARGIN: usize = 256;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PacketSimConfig {
    pub mcs: Mcs,
    pub n_symbols: usize,
    pub model: ChannelModelId,
    pub imp_type: ImpairmentType,
    pub snr_db: f64,
    pub master_seed: u64,
    pub packet_index: u64,
}

/// Simulate one packet end to end. Returns the transmitted ground truth
/// and the received capture with full genie metadata.
pub fn simulate_packet(cfg: &PacketSimConfig, plan: &TonePlan) -> Result<(HesuPacket, RxCapture)> {
    let code = LdpcCode::for_rate(cfg.mcs.rate());
    let seg = SegmentPlan::new(&code, cfg.n_symbols, cfg.mcs);
    let mut payload_rng = SeededRng::for_packet(cfg.master_seed, cfg.packet_index, stage::PAYLOAD);
    let payload = payload_rng.fill_bits(seg.info_capacity);
    let coded = segment_and_pad(&payload, &code, cfg.n_symbols, cfg.mcs)?;
    let pkt = assemble_packet(&coded, cfg.mcs, cfg.n_symbols, plan)?;
    let signal_power_ref = axphy_core::mean_power(&pkt.samples);

    // Idle air after the packet: the front-end keeps running past the last
    // symbol, and the resampler needs signal history beyond the final FFT
    // window.
    let mut padded = pkt.samples.clone();
    padded.extend(std::iter::repeat(axphy_core::Cx::new(0.0, 0.0)).take(TAIL_MARGIN));

    let imp_cfg = ImpairmentConfig::for_type(cfg.imp_type);
    let tx = impairment::apply_tx_stages(&padded, &imp_cfg);

    let channel = if cfg.model == ChannelModelId::A && cfg.imp_type == ImpairmentType::Off {
        // Loopback path: keep the channel exactly transparent.
        ChannelRealization::identity()
    } else {
        let spec = ChannelModelSpec::for_model(cfg.model);
        let mut ch_rng = SeededRng::for_packet(cfg.master_seed, cfg.packet_index, stage::CHANNEL);
        draw_channel(&spec, &mut ch_rng)
    };
    let faded = apply_channel(&tx, &channel);

    let mut clock_rng = SeededRng::for_packet(cfg.master_seed, cfg.packet_index, stage::CLOCK);
    let mut osc_rng = SeededRng::for_packet(cfg.master_seed, cfg.packet_index, stage::OSCILLATOR);
    let (impaired, offsets) =
        impairment::apply_rx_stages(&faded, &imp_cfg, &pkt.layout, &mut clock_rng, &mut osc_rng);

    let mut noise_rng = SeededRng::for_packet(cfg.master_seed, cfg.packet_index, stage::NOISE);
    let (rx, sigma2) = add_awgn(&impaired, cfg.snr_db, signal_power_ref, &mut noise_rng);

    let capture = RxCapture {
        samples: rx,
        layout: pkt.layout,
        genie: GenieMeta {
            snr_db: cfg.snr_db,
            sigma2,
            signal_power_ref,
            model: cfg.model,
            imp_type: cfg.imp_type,
            mcs: cfg.mcs,
            channel,
            offsets,
            master_seed: cfg.master_seed,
            packet_index: cfg.packet_index,
        },
    };
    Ok((pkt, capture))
}
