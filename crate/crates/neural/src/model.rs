//! The clustered model and its training step. Cluster m owns data tones
//! m*S .. (m+1)*S - 1 in ascending tone order; its two networks output 2S
//! reals each, reassembled as S real parts followed by S imaginary parts
//! (mirroring the input convention). Gradients flow through the
//! coefficient product into both networks; clusters never share
//! parameters.

use crate::features::FeatureVector;
use crate::{NeuralError, Result, CPESRO_INPUT, DATA_TONES, EQ_INPUT};
use axphy_core::rng::{stage, SeededRng};
use axphy_core::{par, Cx};
use axphy_frame::Mcs;
use axphy_nn::{DenseNet, Gradients};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct SubModel {
    pub eq_net: DenseNet,
    pub cpesro_net: DenseNet,
}

/// One training example: the features of a received symbol and the 234
/// transmitted constellation points.
#[derive(Debug, Clone)]
pub struct TrainExample {
    pub features: FeatureVector,
    pub labels: Vec<Cx>,
}

/// Architecture hyperparameters of one sub-network pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub clusters: usize,
    pub hidden_layers: usize,
    pub hidden_units: usize,
}

#[derive(Debug, Clone)]
pub struct NeuralReceiver {
    pub clusters: usize,
    pub tones_per_cluster: usize,
    pub sub_models: Vec<SubModel>,
    pub mcs: Mcs,
    pub arch: Architecture,
}

fn mlp_dims(input: usize, hidden_layers: usize, units: usize, output: usize) -> Vec<usize> {
    let mut dims = Vec::with_capacity(hidden_layers + 2);
    dims.push(input);
    dims.extend(std::iter::repeat(units).take(hidden_layers));
    dims.push(output);
    dims
}

impl NeuralReceiver {
    /// Build a fresh model with `clusters` sub-models of `hidden_layers`
    /// tanh layers x `hidden_units`. The output biases start the
    /// coefficients at 1 + 0j so the untrained model passes tones through.
    pub fn new(mcs: Mcs, arch: Architecture, seed: u64) -> Result<Self> {
        if DATA_TONES % arch.clusters != 0 {
            return Err(NeuralError::ClusterGeometry {
                clusters: arch.clusters,
                tones: DATA_TONES / arch.clusters.max(1),
                expected: DATA_TONES,
            });
        }
        let s = DATA_TONES / arch.clusters;
        let sub_models = (0..arch.clusters)
            .map(|m| {
                let mut eq_rng = SeededRng::for_packet(seed, m as u64 * 2, stage::INIT);
                let mut cp_rng = SeededRng::for_packet(seed, m as u64 * 2 + 1, stage::INIT);
                let mut eq_net = DenseNet::glorot(
                    &mlp_dims(EQ_INPUT, arch.hidden_layers, arch.hidden_units, 2 * s),
                    &mut eq_rng,
                );
                let mut cpesro_net = DenseNet::glorot(
                    &mlp_dims(CPESRO_INPUT, arch.hidden_layers, arch.hidden_units, 2 * s),
                    &mut cp_rng,
                );
                for net in [&mut eq_net, &mut cpesro_net] {
                    let out = net.layers.last_mut().expect("output layer");
                    for b in out.b.iter_mut().take(s) {
                        *b = 1.0;
                    }
                }
                SubModel { eq_net, cpesro_net }
            })
            .collect();
        Ok(Self {
            clusters: arch.clusters,
            tones_per_cluster: s,
            sub_models,
            mcs,
            arch,
        })
    }

    /// Tone index range owned by cluster `m` (within the 234 data tones).
    fn cluster_range(&self, m: usize) -> std::ops::Range<usize> {
        m * self.tones_per_cluster..(m + 1) * self.tones_per_cluster
    }

    /// Predict all 234 constellation points of one symbol.
    pub fn predict_symbol(&self, fv: &FeatureVector) -> Vec<Cx> {
        let eq_in = fv.eq_input();
        let cp_in = fv.cpesro_input();
        let s = self.tones_per_cluster;
        let per_cluster = par::map_indexed(self.clusters, |m| {
            let sub = &self.sub_models[m];
            let eq_out = sub.eq_net.forward(&eq_in).expect("widths checked at build");
            let cp_out = sub.cpesro_net.forward(&cp_in).expect("widths checked at build");
            let range = self.cluster_range(m);
            (0..s)
                .map(|i| {
                    let c_eq = Cx::new(eq_out[i], eq_out[s + i]);
                    let c_cp = Cx::new(cp_out[i], cp_out[s + i]);
                    c_eq * c_cp * fv.rx_data[range.start + i]
                })
                .collect::<Vec<Cx>>()
        });
        per_cluster.into_iter().flatten().collect()
    }

    /// One optimization step on a batch. Returns the per-cluster losses
    /// L_m = mean over the batch of (1/S) sum_k |prediction - label|^2.
    /// The whole batch flows through each network as one unit-major block
    /// (weights stream through cache once per batch), with fixed loop
    /// order, so results do not depend on the parallel schedule.
    pub fn train_step(&mut self, batch: &[TrainExample], lr: f64) -> Result<Vec<f64>> {
        if batch.is_empty() {
            return Err(NeuralError::EmptyBatch);
        }
        let s = self.tones_per_cluster;
        let nb = batch.len();
        // Unit-major input blocks shared by every cluster.
        let mut eq_x = vec![0.0; EQ_INPUT * nb];
        let mut cp_x = vec![0.0; CPESRO_INPUT * nb];
        for (b, ex) in batch.iter().enumerate() {
            for (i, v) in ex.features.eq_input().into_iter().enumerate() {
                eq_x[i * nb + b] = v;
            }
            for (i, v) in ex.features.cpesro_input().into_iter().enumerate() {
                cp_x[i * nb + b] = v;
            }
        }
        let work = par::map_indexed(self.clusters, |m| {
            let sub = &self.sub_models[m];
            let range = self.cluster_range(m);
            let mut g_eq = Gradients::zeros_like(&sub.eq_net);
            let mut g_cp = Gradients::zeros_like(&sub.cpesro_net);
            let eq_cache = sub.eq_net.forward_batch(&eq_x, nb).expect("widths");
            let cp_cache = sub.cpesro_net.forward_batch(&cp_x, nb).expect("widths");
            let mut loss = 0.0;
            let inv = 1.0 / (s as f64 * nb as f64);
            let mut d_eq = vec![0.0; 2 * s * nb];
            let mut d_cp = vec![0.0; 2 * s * nb];
            for i in 0..s {
                let eq_re = eq_cache.output_row(i);
                let eq_im = eq_cache.output_row(s + i);
                let cp_re = cp_cache.output_row(i);
                let cp_im = cp_cache.output_row(s + i);
                for (b, ex) in batch.iter().enumerate() {
                    let a = Cx::new(eq_re[b], eq_im[b]);
                    let c = Cx::new(cp_re[b], cp_im[b]);
                    let y = ex.features.rx_data[range.start + i];
                    let e = a * c * y - ex.labels[range.start + i];
                    loss += e.norm_sqr() * inv;
                    // d|e|^2/da = 2 e conj(c y), likewise for c.
                    let ga = (e * (c * y).conj()) * 2.0 * inv;
                    let gc = (e * (a * y).conj()) * 2.0 * inv;
                    d_eq[i * nb + b] = ga.re;
                    d_eq[(s + i) * nb + b] = ga.im;
                    d_cp[i * nb + b] = gc.re;
                    d_cp[(s + i) * nb + b] = gc.im;
                }
            }
            sub.eq_net.backward_batch(&eq_x, &eq_cache, &d_eq, &mut g_eq);
            sub.cpesro_net.backward_batch(&cp_x, &cp_cache, &d_cp, &mut g_cp);
            (loss, g_eq, g_cp)
        });
        let mut losses = Vec::with_capacity(self.clusters);
        for (m, (loss, g_eq, g_cp)) in work.into_iter().enumerate() {
            let sub = &mut self.sub_models[m];
            sub.eq_net.adam_step(&g_eq, lr);
            sub.cpesro_net.adam_step(&g_cp, lr);
            losses.push(loss);
        }
        Ok(losses)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use axphy_core::rng::SeededRng;

    fn toy_features(seed: u64) -> FeatureVector {
        let mut rng = SeededRng::new(seed, 0);
        FeatureVector {
            rx_lltf: (0..104).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            rx_heltf: (0..484).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            rx_pilots: (0..16).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            tx_pilots: (0..16).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            rx_data: (0..234).map(|_| rng.complex_gaussian(1.0)).collect(),
        }
    }

    fn force_constant_outputs(model: &mut NeuralReceiver, eq: Cx, cp: Cx) {
        let s = model.tones_per_cluster;
        for sub in &mut model.sub_models {
            for (net, c) in [(&mut sub.eq_net, eq), (&mut sub.cpesro_net, cp)] {
                for l in &mut net.layers {
                    l.w.iter_mut().for_each(|w| *w = 0.0);
                    l.b.iter_mut().for_each(|b| *b = 0.0);
                }
                let out = net.layers.last_mut().unwrap();
                for i in 0..s {
                    out.b[i] = c.re;
                    out.b[s + i] = c.im;
                }
            }
        }
    }

    #[test]
    fn identity_coefficients_pass_tones_through() {
        let arch = Architecture { clusters: 13, hidden_layers: 2, hidden_units: 8 };
        let mut model = NeuralReceiver::new(Mcs::Mcs7, arch, 1).unwrap();
        force_constant_outputs(&mut model, Cx::new(1.0, 0.0), Cx::new(1.0, 0.0));
        let fv = toy_features(2);
        let out = model.predict_symbol(&fv);
        for (o, y) in out.iter().zip(&fv.rx_data) {
            assert!((o - y).norm() < 1e-12);
        }
    }

    #[test]
    fn genie_coefficients_invert_flat_channel() {
        // h = 0.5 on every tone: eq_net forced to 1/h, cpesro to 1.
        let arch = Architecture { clusters: 13, hidden_layers: 1, hidden_units: 4 };
        let mut model = NeuralReceiver::new(Mcs::Mcs7, arch, 3).unwrap();
        force_constant_outputs(&mut model, Cx::new(2.0, 0.0), Cx::new(1.0, 0.0));
        let mut fv = toy_features(4);
        let tx: Vec<Cx> = fv.rx_data.clone();
        fv.rx_data = tx.iter().map(|x| x * 0.5).collect();
        let out = model.predict_symbol(&fv);
        for (o, x) in out.iter().zip(&tx) {
            assert!((o - x).norm() < 1e-9);
        }
    }

    #[test]
    fn prediction_is_clusterwise_stitching() {
        let arch = Architecture { clusters: 13, hidden_layers: 1, hidden_units: 6 };
        let model = NeuralReceiver::new(Mcs::Mcs7, arch, 5).unwrap();
        let fv = toy_features(6);
        let full = model.predict_symbol(&fv);
        let s = model.tones_per_cluster;
        for m in 0..13 {
            let sub = &model.sub_models[m];
            let eq = sub.eq_net.forward(&fv.eq_input()).unwrap();
            let cp = sub.cpesro_net.forward(&fv.cpesro_input()).unwrap();
            for i in 0..s {
                let expect = Cx::new(eq[i], eq[s + i])
                    * Cx::new(cp[i], cp[s + i])
                    * fv.rx_data[m * s + i];
                assert!((full[m * s + i] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn m1_is_the_same_code_path() {
        let arch = Architecture { clusters: 1, hidden_layers: 1, hidden_units: 8 };
        let model = NeuralReceiver::new(Mcs::Mcs7, arch, 7).unwrap();
        assert_eq!(model.tones_per_cluster, 234);
        let fv = toy_features(8);
        let out = model.predict_symbol(&fv);
        let eq = model.sub_models[0].eq_net.forward(&fv.eq_input()).unwrap();
        let cp = model.sub_models[0].cpesro_net.forward(&fv.cpesro_input()).unwrap();
        for i in 0..234 {
            let expect = Cx::new(eq[i], eq[234 + i]) * Cx::new(cp[i], cp[234 + i]) * fv.rx_data[i];
            assert!((out[i] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn perfect_labels_leave_parameters_unchanged() {
        let arch = Architecture { clusters: 13, hidden_layers: 1, hidden_units: 4 };
        let mut model = NeuralReceiver::new(Mcs::Mcs7, arch, 9).unwrap();
        let fv = toy_features(10);
        let labels = model.predict_symbol(&fv);
        let before = model.clone();
        let losses = model
            .train_step(&[TrainExample { features: fv, labels }], 1e-3)
            .unwrap();
        assert!(losses.iter().all(|&l| l < 1e-24));
        for (a, b) in model.sub_models.iter().zip(&before.sub_models) {
            for (la, lb) in a.eq_net.layers.iter().zip(&b.eq_net.layers) {
                assert_eq!(la.w, lb.w);
            }
        }
    }

    #[test]
    fn product_gradient_matches_finite_differences() {
        // M = 234 makes S = 1: scalar coefficient networks.
        let arch = Architecture { clusters: 234, hidden_layers: 1, hidden_units: 2 };
        let mut model = NeuralReceiver::new(Mcs::Mcs7, arch, 11).unwrap();
        let fv = toy_features(12);
        let mut labels = vec![Cx::new(0.0, 0.0); 234];
        labels[0] = Cx::new(0.3, -0.8);
        let ex = TrainExample { features: fv.clone(), labels: labels.clone() };

        // Analytic gradient for cluster 0's eq output bias (real part).
        let sub = &model.sub_models[0];
        let eq_in = fv.eq_input();
        let cp_in = fv.cpesro_input();
        let loss_of = |m: &NeuralReceiver| -> f64 {
            let p = m.predict_symbol(&fv);
            (p[0] - labels[0]).norm_sqr()
        };
        let (a, b, y) = {
            let eq = sub.eq_net.forward(&eq_in).unwrap();
            let cp = sub.cpesro_net.forward(&cp_in).unwrap();
            (Cx::new(eq[0], eq[1]), Cx::new(cp[0], cp[1]), fv.rx_data[0])
        };
        let e = a * b * y - labels[0];
        let analytic = (e * (b * y).conj()) * 2.0;

        let h = 1e-6;
        let bias_idx = 0; // real part of the scalar coefficient
        let mut plus = model.clone();
        plus.sub_models[0].eq_net.layers.last_mut().unwrap().b[bias_idx] += h;
        let mut minus = model.clone();
        minus.sub_models[0].eq_net.layers.last_mut().unwrap().b[bias_idx] -= h;
        let numeric = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
        assert!(
            (numeric - analytic.re).abs() < 1e-6 * numeric.abs().max(1.0),
            "numeric {numeric} vs analytic {}",
            analytic.re
        );

        // And the training step moves only toward that gradient.
        model.train_step(&[ex], 1e-4).unwrap();
    }

    #[test]
    fn training_one_cluster_leaves_others_untouched() {
        let arch = Architecture { clusters: 13, hidden_layers: 1, hidden_units: 4 };
        let mut model = NeuralReceiver::new(Mcs::Mcs7, arch, 13).unwrap();
        let fv = toy_features(14);
        let mut labels = model.predict_symbol(&fv);
        // Perturb only cluster 3's tones (54..72).
        for k in 54..72 {
            labels[k] += Cx::new(0.5, -0.5);
        }
        let before = model.clone();
        model
            .train_step(&[TrainExample { features: fv, labels }], 1e-3)
            .unwrap();
        for m in 0..13 {
            let same = model.sub_models[m]
                .eq_net
                .layers
                .iter()
                .zip(&before.sub_models[m].eq_net.layers)
                .all(|(a, b)| a.w == b.w && a.b == b.b);
            if m == 3 {
                assert!(!same, "perturbed cluster must update");
            } else {
                assert!(same, "cluster {m} must not change");
            }
        }
    }

    #[test]
    fn bad_cluster_geometry_rejected() {
        let arch = Architecture { clusters: 5, hidden_layers: 1, hidden_units: 4 };
        assert!(NeuralReceiver::new(Mcs::Mcs7, arch, 0).is_err());
    }
}
