//! Record counts and mean powers grouped by (MCS, SNR, model, type).

use crate::shard::ShardSet;
use crate::Result;
use axphy_channel::{ChannelModelId, ImpairmentType};
use axphy_frame::Mcs;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub mcs: Mcs,
    pub snr_db: f64,
    pub model: ChannelModelId,
    pub imp_type: ImpairmentType,
    pub records: u64,
    pub mean_rx_power: f64,
    pub mean_noise_power: f64,
}

pub fn dataset_stats(paths: &[PathBuf]) -> Result<Vec<StatsRow>> {
    let mut set = ShardSet::open(paths)?;
    // Key: (mcs, snr milli-dB or i64::MAX for +inf, model, type).
    let mut groups: BTreeMap<(u8, i64, u8, u8), (u64, f64, f64, f64)> = BTreeMap::new();
    for g in 0..set.record_count() {
        let r = set.read(g)?;
        let snr_key = if r.snr_db.is_infinite() {
            i64::MAX
        } else {
            (r.snr_db * 1000.0).round() as i64
        };
        let key = (r.mcs.index(), snr_key, r.model.index(), r.imp_type.index());
        let e = groups.entry(key).or_insert((0, 0.0, 0.0, r.snr_db));
        e.0 += 1;
        e.1 += r.rx_power;
        e.2 += r.sigma2;
    }
    Ok(groups
        .into_iter()
        .map(|((mcs, _, model, ty), (n, p, s2, snr))| StatsRow {
            mcs: Mcs::from_index(mcs).expect("written by us"),
            snr_db: snr,
            model: ChannelModelId::from_index(model).expect("written by us"),
            imp_type: ImpairmentType::from_index(ty).expect("written by us"),
            records: n,
            mean_rx_power: p / n as f64,
            mean_noise_power: s2 / n as f64,
        })
        .collect())
}

pub fn stats_to_csv(rows: &[StatsRow]) -> String {
    let mut out = String::from("mcs,snr_db,model,type,records,mean_rx_power,mean_noise_power\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6e},{:.6e}\n",
            r.mcs.index(),
            if r.snr_db.is_infinite() { "inf".to_string() } else { format!("{}", r.snr_db) },
            r.model.letter(),
            r.imp_type.index(),
            r.records,
            r.mean_rx_power,
            r.mean_noise_power,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{DatasetSpec, McsPlan, SnrQuota};

    #[test]
    fn empty_dataset_empty_table() {
        let rows = dataset_stats(&[]).unwrap();
        assert!(rows.is_empty());
        let csv = stats_to_csv(&rows);
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn toy_groups_sum_to_total() {
        let dir = std::env::temp_dir().join("axphy_stats_toy");
        std::fs::remove_dir_all(&dir).ok();
        let spec = DatasetSpec {
            plans: vec![McsPlan {
                mcs: Mcs::Mcs7,
                grid: vec![
                    SnrQuota { snr_db: 30.0, packets_per_setting: 1 },
                    SnrQuota { snr_db: f64::INFINITY, packets_per_setting: 1 },
                ],
            }],
            models: vec![ChannelModelId::A],
            imp_types: vec![ImpairmentType::TypeI],
            symbols_per_packet: 16,
            master_seed: 5,
        };
        let paths = crate::generate(&spec, &dir).unwrap();
        let rows = dataset_stats(&paths).unwrap();
        let total: u64 = rows.iter().map(|r| r.records).sum();
        assert_eq!(total, 32);
        let inf_row = rows.iter().find(|r| r.snr_db.is_infinite()).unwrap();
        assert_eq!(inf_row.mean_noise_power, 0.0);
        std::fs::remove_dir_all(&dir).ok();
    }
}
