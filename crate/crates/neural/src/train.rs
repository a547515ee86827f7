//! The training loop: seeded shuffling, mini-batch epochs, per-epoch
//! per-cluster loss logging and optional per-epoch checkpoints. Batches
//! come through `BatchSource`, so the same loop drives in-memory toy sets
//! and shard files streamed from disk. Warm starting is loading a bundle
//! and training again with a new learning rate.

use crate::bundle::save_bundle;
use crate::model::{NeuralReceiver, TrainExample};
use crate::Result;
use axphy_core::rng::{stage, SeededRng};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Supplies training examples by global index.
pub trait BatchSource {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn fetch(&mut self, indices: &[usize]) -> Result<Vec<TrainExample>>;
}

/// In-memory batch source.
pub struct SliceSource<'a>(pub &'a [TrainExample]);

impl BatchSource for SliceSource<'_> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn fetch(&mut self, indices: &[usize]) -> Result<Vec<TrainExample>> {
        Ok(indices.iter().map(|&i| self.0[i].clone()).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub batch: usize,
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
    /// When set, a checkpoint bundle is written after every epoch.
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            batch: 5120,
            lr: 1e-5,
            epochs: 1,
            seed: 0,
            checkpoint_dir: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrainReport {
    /// [epoch][cluster] mean training loss.
    pub epoch_cluster_loss: Vec<Vec<f64>>,
}

impl TrainReport {
    /// Mean loss across clusters per epoch.
    pub fn epoch_loss(&self) -> Vec<f64> {
        self.epoch_cluster_loss
            .iter()
            .map(|c| c.iter().sum::<f64>() / c.len().max(1) as f64)
            .collect()
    }
}

pub fn train(
    model: &mut NeuralReceiver,
    source: &mut dyn BatchSource,
    cfg: &TrainConfig,
) -> Result<TrainReport> {
    let mut report = TrainReport::default();
    if source.is_empty() || cfg.epochs == 0 {
        return Ok(report);
    }
    let mut order: Vec<usize> = (0..source.len()).collect();
    for epoch in 0..cfg.epochs {
        let mut rng = SeededRng::for_packet(cfg.seed, epoch as u64, stage::SHUFFLE);
        rng.shuffle(&mut order);
        let mut acc = vec![0.0; model.clusters];
        let mut batches = 0usize;
        for chunk in order.chunks(cfg.batch) {
            let batch = source.fetch(chunk)?;
            let losses = model.train_step(&batch, cfg.lr)?;
            for (a, l) in acc.iter_mut().zip(&losses) {
                *a += l;
            }
            batches += 1;
        }
        for a in &mut acc {
            *a /= batches as f64;
        }
        report.epoch_cluster_loss.push(acc);
        if let Some(dir) = &cfg.checkpoint_dir {
            let ckpt = dir.join(format!("epoch_{epoch:03}"));
            save_bundle(model, &ckpt, serde_json::json!({"epoch": epoch, "config": cfg}))?;
        }
    }
    Ok(report)
}
