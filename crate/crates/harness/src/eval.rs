//! SNR sweeps. Every evaluation regenerates fresh random packets from its
//! own seed (never training data), simulates the full chain that the
//! dataset generator uses, and accumulates error rates per
//! (SNR, model, type) with packet-level parallelism. Per-packet seeds make
//! the schedule irrelevant to the results.

use crate::receiver::{decode_packet, PacketOutcome, Receiver};
use crate::stats_util::wilson;
use crate::{HarnessError, Result};
use axphy_channel::{ChannelModelId, ImpairmentType};
use axphy_core::par;
use axphy_dataset::{simulate_packet, PacketSimConfig};
use axphy_frame::plan::TonePlan;
use axphy_frame::Mcs;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalSpec {
    pub mcs: Mcs,
    pub snr_grid: Vec<f64>,
    pub models: Vec<ChannelModelId>,
    pub imp_types: Vec<ImpairmentType>,
    /// Packets per (model, type) setting at each SNR.
    pub packets_per_setting: usize,
    pub n_symbols: usize,
    pub seed: u64,
}

impl Default for EvalSpec {
    fn default() -> Self {
        Self {
            mcs: Mcs::Mcs7,
            snr_grid: vec![25.0, 30.0, 35.0],
            models: ChannelModelId::ALL.to_vec(),
            imp_types: ImpairmentType::ALL.to_vec(),
            packets_per_setting: 100,
            n_symbols: 16,
            seed: 1,
        }
    }
}

/// One (receiver, MCS, SNR, model, type) row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalPoint {
    pub receiver: String,
    pub mcs: u8,
    pub snr_db: f64,
    pub model: char,
    pub imp_type: u8,
    pub ber: f64,
    pub ber_ci: f64,
    pub per: f64,
    pub per_ci: f64,
    pub packets: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub packet_errors: u64,
    /// Converged packets whose decode came out worse than raw (must be 0).
    pub fec_hurt_count: u64,
}

/// Run the sweep. Rows come back in deterministic (snr, model, type) order.
pub fn evaluate(receiver: &Receiver, spec: &EvalSpec, plan: &TonePlan) -> Result<Vec<EvalPoint>> {
    if spec.models.is_empty() || spec.imp_types.is_empty() || spec.snr_grid.is_empty() {
        return Err(HarnessError::Config("empty evaluation grid".into()));
    }
    if let Receiver::Neural(model) = receiver {
        if model.mcs != spec.mcs {
            return Err(HarnessError::Config(format!(
                "model trained for MCS {}, evaluation requests MCS {}",
                model.mcs.index(),
                spec.mcs.index()
            )));
        }
    }
    let mut rows = Vec::new();
    let mut packet_cursor: u64 = 0;
    for &snr_db in &spec.snr_grid {
        for &model in &spec.models {
            for &imp_type in &spec.imp_types {
                let n = spec.packets_per_setting;
                let base = packet_cursor;
                packet_cursor += n as u64;
                let outcomes: Vec<Result<PacketOutcome>> = par::map_indexed(n, |i| {
                    let cfg = PacketSimConfig {
                        mcs: spec.mcs,
                        n_symbols: spec.n_symbols,
                        model,
                        imp_type,
                        snr_db,
                        master_seed: spec.seed,
                        packet_index: base + i as u64,
                    };
                    let (pkt, cap) = simulate_packet(&cfg, plan)?;
                    decode_packet(receiver, &pkt, &cap, plan)
                });
                let mut acc = PacketOutcome::default();
                let mut packet_errors = 0u64;
                let mut fec_hurt = 0u64;
                let mut packets = 0u64;
                for o in outcomes {
                    let o = o?;
                    acc.prefec_bit_errors += o.prefec_bit_errors;
                    acc.coded_bits += o.coded_bits;
                    packet_errors += o.packet_error as u64;
                    fec_hurt += o.fec_hurt_converged as u64;
                    packets += 1;
                }
                let (ber, ber_ci) = wilson(acc.prefec_bit_errors, acc.coded_bits);
                let (per, per_ci) = wilson(packet_errors, packets);
                rows.push(EvalPoint {
                    receiver: receiver.label(),
                    mcs: spec.mcs.index(),
                    snr_db,
                    model: model.letter(),
                    imp_type: imp_type.index(),
                    ber,
                    ber_ci,
                    per,
                    per_ci,
                    packets,
                    bits: acc.coded_bits,
                    bit_errors: acc.prefec_bit_errors,
                    packet_errors,
                    fec_hurt_count: fec_hurt,
                });
            }
        }
    }
    Ok(rows)
}

/// Collapse rows sharing an SNR into one aggregate (over models and types).
pub fn aggregate_per_snr(rows: &[EvalPoint]) -> Vec<EvalPoint> {
    let mut by_snr: Vec<(f64, Vec<&EvalPoint>)> = Vec::new();
    for r in rows {
        match by_snr.iter_mut().find(|(s, _)| approx_snr(*s, r.snr_db)) {
            Some((_, v)) => v.push(r),
            None => by_snr.push((r.snr_db, vec![r])),
        }
    }
    by_snr
        .into_iter()
        .map(|(snr, group)| {
            let bit_errors: u64 = group.iter().map(|r| r.bit_errors).sum();
            let bits: u64 = group.iter().map(|r| r.bits).sum();
            let packet_errors: u64 = group.iter().map(|r| r.packet_errors).sum();
            let packets: u64 = group.iter().map(|r| r.packets).sum();
            let (ber, ber_ci) = wilson(bit_errors, bits);
            let (per, per_ci) = wilson(packet_errors, packets);
            EvalPoint {
                receiver: group[0].receiver.clone(),
                mcs: group[0].mcs,
                snr_db: snr,
                model: '*',
                imp_type: 0,
                ber,
                ber_ci,
                per,
                per_ci,
                packets,
                bits,
                bit_errors,
                packet_errors,
                fec_hurt_count: group.iter().map(|r| r.fec_hurt_count).sum(),
            }
        })
        .collect()
}

pub fn approx_snr(a: f64, b: f64) -> bool {
    (a.is_infinite() && b.is_infinite() && a.signum() == b.signum()) || (a - b).abs() < 1e-9
}

pub fn to_csv(rows: &[EvalPoint]) -> String {
    let mut out = String::from("receiver,mcs,snr_db,model,type,ber,ber_ci,per,per_ci,packets,bits\n");
    for r in rows {
        let snr = if r.snr_db.is_infinite() {
            "inf".to_string()
        } else {
            format!("{}", r.snr_db)
        };
        out.push_str(&format!(
            "{},{},{},{},{},{:.8e},{:.8e},{:.8e},{:.8e},{},{}\n",
            r.receiver, r.mcs, snr, r.model, r.imp_type, r.ber, r.ber_ci, r.per, r.per_ci,
            r.packets, r.bits
        ));
    }
    out
}

/// Parse rows back from the CSV schema (for `compare` on saved sweeps).
pub fn from_csv(text: &str) -> Result<Vec<EvalPoint>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 11 {
            return Err(HarnessError::Config(format!(
                "csv line {} has {} fields, expected 11",
                i + 1,
                f.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            if s == "inf" {
                Ok(f64::INFINITY)
            } else {
                s.parse()
                    .map_err(|e| HarnessError::Config(format!("csv line {}: {e}", i + 1)))
            }
        };
        let packets: u64 = f[9]
            .parse()
            .map_err(|e| HarnessError::Config(format!("csv line {}: {e}", i + 1)))?;
        let bits: u64 = f[10]
            .parse()
            .map_err(|e| HarnessError::Config(format!("csv line {}: {e}", i + 1)))?;
        let ber = parse(f[5])?;
        let per = parse(f[7])?;
        rows.push(EvalPoint {
            receiver: f[0].to_string(),
            mcs: f[1].parse().unwrap_or(0),
            snr_db: parse(f[2])?,
            model: f[3].chars().next().unwrap_or('?'),
            imp_type: f[4].parse().unwrap_or(0),
            ber,
            ber_ci: parse(f[6])?,
            per,
            per_ci: parse(f[8])?,
            packets,
            bits,
            bit_errors: (ber * bits as f64).round() as u64,
            packet_errors: (per * packets as f64).round() as u64,
            fec_hurt_count: 0,
        });
    }
    Ok(rows)
}
