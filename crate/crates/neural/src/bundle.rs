//! Model bundles: a directory holding the 2M weight files plus a JSON
//! manifest describing the geometry, target MCS and training provenance.

use crate::model::{Architecture, NeuralReceiver, SubModel};
use crate::{NeuralError, Result};
use axphy_frame::Mcs;
use axphy_nn::io::{load_weights, save_weights};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleManifest {
    pub version: u32,
    pub mcs_index: u8,
    pub clusters: usize,
    pub tones_per_cluster: usize,
    pub hidden_layers: usize,
    pub hidden_units: usize,
    /// Free-form training provenance (config, dataset fingerprint, epoch).
    pub training: serde_json::Value,
}

pub fn save_bundle(
    model: &NeuralReceiver,
    dir: &Path,
    training: serde_json::Value,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (m, sub) in model.sub_models.iter().enumerate() {
        save_weights(&sub.eq_net, &dir.join(format!("eq_{m:03}.axnn")))?;
        save_weights(&sub.cpesro_net, &dir.join(format!("cpesro_{m:03}.axnn")))?;
    }
    let manifest = BundleManifest {
        version: BUNDLE_VERSION,
        mcs_index: model.mcs.index(),
        clusters: model.clusters,
        tones_per_cluster: model.tones_per_cluster,
        hidden_layers: model.arch.hidden_layers,
        hidden_units: model.arch.hidden_units,
        training,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| NeuralError::Bundle(e.to_string()))?;
    std::fs::write(dir.join("manifest.json"), json)?;
    Ok(())
}

pub fn load_bundle(dir: &Path) -> Result<(NeuralReceiver, BundleManifest)> {
    let manifest_path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&manifest_path)
        .map_err(|e| NeuralError::Bundle(format!("{}: {e}", manifest_path.display())))?;
    let manifest: BundleManifest =
        serde_json::from_str(&text).map_err(|e| NeuralError::Bundle(e.to_string()))?;
    if manifest.version != BUNDLE_VERSION {
        return Err(NeuralError::Bundle(format!(
            "unsupported bundle version {}",
            manifest.version
        )));
    }
    let mcs = Mcs::from_index(manifest.mcs_index)
        .ok_or_else(|| NeuralError::Bundle(format!("unknown MCS index {}", manifest.mcs_index)))?;
    let mut sub_models = Vec::with_capacity(manifest.clusters);
    for m in 0..manifest.clusters {
        let eq_net = load_weights(&dir.join(format!("eq_{m:03}.axnn")))?;
        let cpesro_net = load_weights(&dir.join(format!("cpesro_{m:03}.axnn")))?;
        sub_models.push(SubModel { eq_net, cpesro_net });
    }
    let arch = Architecture {
        clusters: manifest.clusters,
        hidden_layers: manifest.hidden_layers,
        hidden_units: manifest.hidden_units,
    };
    Ok((
        NeuralReceiver {
            clusters: manifest.clusters,
            tones_per_cluster: manifest.tones_per_cluster,
            sub_models,
            mcs,
            arch,
        },
        manifest,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureVector;
    use axphy_core::rng::SeededRng;
    use axphy_core::Cx;

    #[test]
    fn bundle_round_trip_preserves_predictions() {
        let arch = Architecture { clusters: 13, hidden_layers: 2, hidden_units: 8 };
        let model = NeuralReceiver::new(Mcs::Mcs7, arch, 77).unwrap();
        let dir = std::env::temp_dir().join("axphy_bundle_test");
        std::fs::remove_dir_all(&dir).ok();
        save_bundle(&model, &dir, serde_json::json!({"note": "test"})).unwrap();
        let (back, manifest) = load_bundle(&dir).unwrap();
        assert_eq!(manifest.clusters, 13);
        assert_eq!(back.mcs, Mcs::Mcs7);
        let mut rng = SeededRng::new(1, 1);
        let fv = FeatureVector {
            rx_lltf: (0..104).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            rx_heltf: (0..484).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            rx_pilots: (0..16).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            tx_pilots: (0..16).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            rx_data: (0..234).map(|_| rng.complex_gaussian(1.0)).collect(),
        };
        let a = model.predict_symbol(&fv);
        let b = back.predict_symbol(&fv);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y, "weights must round-trip bit-exactly");
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn missing_manifest_names_the_path() {
        let dir = std::env::temp_dir().join("axphy_bundle_missing");
        std::fs::remove_dir_all(&dir).ok();
        let err = load_bundle(&dir).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("manifest.json"), "got: {msg}");
    }
}
