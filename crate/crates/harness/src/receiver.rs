//! Receivers under test and the per-packet decode bookkeeping.

use crate::Result;
use axphy_channel::RxCapture;
use axphy_core::Cx;
use axphy_fec::{segment::decode_stream, soft_demap, LdpcCode};
use axphy_frame::ltf::heltf_sequence;
use axphy_frame::ofdm::demodulate_symbol;
use axphy_frame::packet::HesuPacket;
use axphy_frame::plan::TonePlan;
use axphy_neural::{extract_features, NeuralReceiver};
use axphy_rx::{
    estimate_noise_variance, hard_demap, ls_channel_estimate, ConventionalReceiver,
    GenieReceiver, ReceiverConfig,
};

pub const LDPC_ITERATIONS: usize = 20;
/// Floor applied to sigma^2 when forming LLRs so the +inf dB rows stay
/// numerically defined (the LLR clip bounds the result anyway).
const SIGMA2_FLOOR: f64 = 1e-12;

pub enum Receiver {
    /// Oracle fed with the true channel, offsets and noise variance.
    Genie,
    Conventional(ReceiverConfig),
    Neural(Box<NeuralReceiver>),
}

impl Receiver {
    pub fn label(&self) -> String {
        match self {
            Receiver::Genie => "genie".into(),
            Receiver::Conventional(cfg) => cfg.label(),
            Receiver::Neural(m) => format!("neural-m{}", m.clusters),
        }
    }
}

/// Error counts for one decoded packet.
#[derive(Debug, Clone, Copy, Default)]
pub struct PacketOutcome {
    pub prefec_bit_errors: u64,
    pub coded_bits: u64,
    pub info_bit_errors: u64,
    pub info_bits: u64,
    pub packet_error: bool,
    pub all_codewords_converged: bool,
    /// True when this converged packet had post-FEC info error rate above
    /// its pre-FEC coded error rate (should never happen).
    pub fec_hurt_converged: bool,
}

/// Equalized points plus the per-tone reliabilities used for the LLRs.
struct Equalized {
    symbols: Vec<Vec<Cx>>,
    h_eff: Vec<Vec<Cx>>,
    sigma2: f64,
}

fn run_front_end(
    receiver: &Receiver,
    capture: &RxCapture,
    plan: &TonePlan,
) -> Result<Equalized> {
    match receiver {
        Receiver::Genie => {
            let out = GenieReceiver::process(capture, plan)?;
            Ok(Equalized {
                symbols: out.symbols.iter().map(|s| s.points.clone()).collect(),
                h_eff: out.symbols.iter().map(|s| s.h_eff.clone()).collect(),
                sigma2: out.sigma2,
            })
        }
        Receiver::Conventional(cfg) => {
            let out = ConventionalReceiver::new(*cfg).process(capture, plan)?;
            Ok(Equalized {
                symbols: out.symbols.iter().map(|s| s.points.clone()).collect(),
                h_eff: out.symbols.iter().map(|s| s.h_eff.clone()).collect(),
                sigma2: out.sigma2,
            })
        }
        Receiver::Neural(model) => {
            // The networks produce the constellation estimates; the raw LS
            // channel magnitudes and the L-LTF noise estimate still grade
            // per-tone reliability for the decoder.
            let sigma2 = estimate_noise_variance(capture.lltf());
            let heltf_grid = demodulate_symbol(capture.heltf(), plan)?;
            let est = ls_channel_estimate(&heltf_grid, &heltf_sequence(plan), plan);
            let h_data: Vec<Cx> = plan.data_tones.iter().map(|&k| est.at(k, plan)).collect();
            let mut symbols = Vec::with_capacity(capture.layout.n_data_symbols);
            let mut h_eff = Vec::with_capacity(capture.layout.n_data_symbols);
            for m in 0..capture.layout.n_data_symbols {
                let fv = extract_features(capture, m, plan)?;
                symbols.push(model.predict_symbol(&fv));
                h_eff.push(h_data.clone());
            }
            Ok(Equalized {
                symbols,
                h_eff,
                sigma2,
            })
        }
    }
}

/// Decode one packet and count errors against the transmitted truth.
pub fn decode_packet(
    receiver: &Receiver,
    pkt: &HesuPacket,
    capture: &RxCapture,
    plan: &TonePlan,
) -> Result<PacketOutcome> {
    let order = pkt.mcs.order();
    let eq = run_front_end(receiver, capture, plan)?;

    // Pre-FEC bits.
    let mut rx_bits = Vec::with_capacity(pkt.tx_bits.len());
    for sym in &eq.symbols {
        rx_bits.extend(hard_demap(sym, order));
    }
    debug_assert_eq!(rx_bits.len(), pkt.tx_bits.len());
    let prefec_bit_errors = rx_bits
        .iter()
        .zip(&pkt.tx_bits)
        .filter(|(a, b)| a != b)
        .count() as u64;

    // LLRs and LDPC decoding.
    let sigma2 = eq.sigma2.max(SIGMA2_FLOOR);
    let mut llrs = Vec::with_capacity(pkt.tx_bits.len());
    for (sym, hs) in eq.symbols.iter().zip(&eq.h_eff) {
        for (x_hat, h) in sym.iter().zip(hs) {
            llrs.extend(soft_demap(*x_hat, *h, sigma2, order));
        }
    }
    let code = LdpcCode::for_rate(pkt.mcs.rate());
    let n_symbols = capture.layout.n_data_symbols;
    let (info_rx, converged) =
        decode_stream(&llrs, &code, n_symbols, pkt.mcs, LDPC_ITERATIONS)?;
    // Transmitted info bits are the systematic prefix of each codeword.
    let n_cw = info_rx.len() / code.k;
    let mut info_bit_errors = 0u64;
    for cw in 0..n_cw {
        let tx = &pkt.tx_bits[cw * code.n..cw * code.n + code.k];
        let rx = &info_rx[cw * code.k..(cw + 1) * code.k];
        info_bit_errors += tx.iter().zip(rx).filter(|(a, b)| a != b).count() as u64;
    }
    let info_bits = (n_cw * code.k) as u64;
    let coded_bits = pkt.tx_bits.len() as u64;
    let fec_hurt_converged = converged
        && info_bits > 0
        && (info_bit_errors as f64 / info_bits as f64)
            > (prefec_bit_errors as f64 / coded_bits as f64);
    Ok(PacketOutcome {
        prefec_bit_errors,
        coded_bits,
        info_bit_errors,
        info_bits,
        packet_error: info_bit_errors > 0,
        all_codewords_converged: converged,
        fec_hurt_converged,
    })
}
