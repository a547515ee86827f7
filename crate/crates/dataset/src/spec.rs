//! Dataset composition: per-MCS SNR grids with packet quotas applied to
//! every (channel model, impairment type) setting. The full-scale plan
//! reproduces the published composition; the desk-scale default shrinks it
//! by roughly 2000x while keeping the structure.

use axphy_channel::{ChannelModelId, ImpairmentType};
use axphy_frame::Mcs;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SnrQuota {
    pub snr_db: f64,
    /// Packets generated per (model, impairment type) setting at this SNR.
    pub packets_per_setting: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McsPlan {
    pub mcs: Mcs,
    pub grid: Vec<SnrQuota>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub plans: Vec<McsPlan>,
    pub models: Vec<ChannelModelId>,
    pub imp_types: Vec<ImpairmentType>,
    pub symbols_per_packet: usize,
    pub master_seed: u64,
}

impl DatasetSpec {
    /// Number of (model, type) settings.
    pub fn settings(&self) -> usize {
        self.models.len() * self.imp_types.len()
    }

    /// Total records (one per OFDM symbol) the spec will generate.
    pub fn total_records(&self) -> usize {
        let per_setting: usize = self
            .plans
            .iter()
            .flat_map(|p| p.grid.iter().map(|q| q.packets_per_setting))
            .sum();
        per_setting * self.settings() * self.symbols_per_packet
    }

    pub fn total_packets(&self) -> usize {
        let per_setting: usize = self
            .plans
            .iter()
            .flat_map(|p| p.grid.iter().map(|q| q.packets_per_setting))
            .sum();
        per_setting * self.settings()
    }

    /// Desk-scale default: all six models, all three impairment types,
    /// 20 packets of 16 symbols per setting and SNR point.
    pub fn desk_scale(mcs: Mcs, seed: u64) -> Self {
        let snrs = Self::snr_grid(mcs);
        Self {
            plans: vec![McsPlan {
            mcs,
                grid: snrs
                    .iter()
                    .map(|&snr_db| SnrQuota {
                        snr_db,
                        packets_per_setting: 20,
                    })
                    .collect(),
            }],
            models: ChannelModelId::ALL.to_vec(),
            imp_types: ImpairmentType::ALL.to_vec(),
            symbols_per_packet: 16,
            master_seed: seed,
        }
    }

    /// Full-scale composition: 3200 packets of 128 symbols per setting at
    /// each finite SNR, 4000 at +inf; zero-quota rows are omitted.
    pub fn full_scale(mcs: Mcs, seed: u64) -> Self {
        let grid = Self::snr_grid(mcs)
            .iter()
            .map(|&snr_db| SnrQuota {
                snr_db,
                packets_per_setting: if snr_db.is_infinite() { 4000 } else { 3200 },
            })
            .collect();
        Self {
            plans: vec![McsPlan { mcs, grid }],
            models: ChannelModelId::ALL.to_vec(),
            imp_types: ImpairmentType::ALL.to_vec(),
            symbols_per_packet: 128,
            master_seed: seed,
        }
    }

    /// SNR rows per MCS: 64-QAM runs 25-45 dB, the denser constellations
    /// run 30-50 dB; every MCS has the +inf row.
    pub fn snr_grid(mcs: Mcs) -> Vec<f64> {
        match mcs {
            Mcs::Mcs7 | Mcs::BpskDebug => {
                vec![25.0, 30.0, 35.0, 40.0, 45.0, f64::INFINITY]
            }
            _ => vec![30.0, 35.0, 40.0, 45.0, 50.0, f64::INFINITY],
        }
    }
}
