//! Per-symbol feature assembly. Every received field is normalized so its
//! squared Euclidean norm equals its tone count before being split into
//! network inputs; complex values become real vectors as all real parts
//! followed by all imaginary parts.

use crate::{NeuralError, Result, CPESRO_INPUT, EQ_INPUT};
use axphy_channel::RxCapture;
use axphy_core::field::normalize_field;
use axphy_core::Cx;
use axphy_frame::ltf::{lltf_tones, LLTF_FFT};
use axphy_frame::ofdm::{demodulate_symbol, demodulate_window};
use axphy_frame::pilot::pilot_sequence;
use axphy_frame::plan::TonePlan;

#[derive(Debug, Clone)]
pub struct FeatureVector {
    /// 104 reals: the two L-LTF repetitions averaged, normalized.
    pub rx_lltf: Vec<f64>,
    /// 484 reals: normalized HE-LTF active tones.
    pub rx_heltf: Vec<f64>,
    /// 16 reals: received pilot tones of this symbol (normalized field).
    pub rx_pilots: Vec<f64>,
    /// 16 reals: transmitted pilot values for this symbol index.
    pub tx_pilots: Vec<f64>,
    /// 234 normalized received data tones, kept complex: they enter the
    /// prediction product, not the networks.
    pub rx_data: Vec<Cx>,
}

fn concat_re_im(values: &[Cx]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len() * 2);
    out.extend(values.iter().map(|v| v.re));
    out.extend(values.iter().map(|v| v.im));
    out
}

impl FeatureVector {
    pub fn eq_input(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(EQ_INPUT);
        v.extend_from_slice(&self.rx_lltf);
        v.extend_from_slice(&self.rx_heltf);
        v
    }

    pub fn cpesro_input(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(CPESRO_INPUT);
        v.extend_from_slice(&self.rx_lltf);
        v.extend_from_slice(&self.rx_heltf);
        v.extend_from_slice(&self.tx_pilots);
        v.extend_from_slice(&self.rx_pilots);
        v
    }
}

/// Demodulate the training fields and DATA symbol `m` of a capture and
/// assemble the normalized features.
pub fn extract_features(capture: &RxCapture, m: usize, plan: &TonePlan) -> Result<FeatureVector> {
    if m >= capture.layout.n_data_symbols {
        return Err(NeuralError::SymbolIndex {
            got: m,
            n_symbols: capture.layout.n_data_symbols,
        });
    }
    // L-LTF: average the two repetitions, then normalize the 52-tone field.
    let lltf = capture.lltf();
    let r1 = demodulate_window(&lltf[32..96], LLTF_FFT)?;
    let r2 = demodulate_window(&lltf[96..160], LLTF_FFT)?;
    let lltf_avg: Vec<Cx> = lltf_tones()
        .iter()
        .map(|&k| {
            let bin = (k.rem_euclid(LLTF_FFT as i32)) as usize;
            (r1[bin] + r2[bin]) * 0.5
        })
        .collect();
    let rx_lltf = concat_re_im(&normalize_field(&lltf_avg)?);

    // HE-LTF: normalize the 242 active tones.
    let heltf_grid = demodulate_symbol(capture.heltf(), plan)?;
    let rx_heltf = concat_re_im(&normalize_field(&heltf_grid.tones(&plan.active_tones))?);

    // DATA symbol m: normalize the full 242-tone field first, then split
    // data and pilot tones out of it.
    let data_grid = demodulate_symbol(capture.data_symbol(m), plan)?;
    let normalized = normalize_field(&data_grid.tones(&plan.active_tones))?;
    let mut rx_data = Vec::with_capacity(plan.data_tones.len());
    let mut rx_pilot_vals = Vec::with_capacity(plan.pilot_tones.len());
    for (&k, v) in plan.active_tones.iter().zip(&normalized) {
        if plan.pilot_tones.contains(&k) {
            rx_pilot_vals.push(*v);
        } else {
            rx_data.push(*v);
        }
    }
    let tx_pilots = concat_re_im(&pilot_sequence(m));

    Ok(FeatureVector {
        rx_lltf,
        rx_heltf,
        rx_pilots: concat_re_im(&rx_pilot_vals),
        tx_pilots,
        rx_data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use axphy_channel::{ChannelModelId, ChannelRealization, GenieMeta, GenieOffsets, ImpairmentType};
    use axphy_core::rng::SeededRng;
    use axphy_frame::packet::assemble_packet;
    use axphy_frame::Mcs;

    fn toy_capture(scale: f64) -> RxCapture {
        let plan = TonePlan::new();
        let bits = SeededRng::new(5, 5).fill_bits(Mcs::Mcs7.coded_bits_per_symbol() * 2);
        let pkt = assemble_packet(&bits, Mcs::Mcs7, 2, &plan).unwrap();
        let samples = pkt.samples.iter().map(|v| v * scale).collect();
        RxCapture {
            samples,
            layout: pkt.layout,
            genie: GenieMeta {
                snr_db: f64::INFINITY,
                sigma2: 0.0,
                signal_power_ref: 1.0,
                model: ChannelModelId::A,
                imp_type: ImpairmentType::Off,
                mcs: Mcs::Mcs7,
                channel: ChannelRealization::identity(),
                offsets: GenieOffsets::default(),
                master_seed: 0,
                packet_index: 0,
            },
        }
    }

    #[test]
    fn widths_and_norms() {
        let plan = TonePlan::new();
        let cap = toy_capture(1.0);
        let fv = extract_features(&cap, 0, &plan).unwrap();
        assert_eq!(fv.rx_lltf.len(), 104);
        assert_eq!(fv.rx_heltf.len(), 484);
        assert_eq!(fv.rx_pilots.len(), 16);
        assert_eq!(fv.tx_pilots.len(), 16);
        assert_eq!(fv.rx_data.len(), 234);
        let heltf_nsq: f64 = fv.rx_heltf.iter().map(|v| v * v).sum();
        assert!((heltf_nsq - 242.0).abs() < 1e-9, "heltf norm^2 {heltf_nsq}");
        let lltf_nsq: f64 = fv.rx_lltf.iter().map(|v| v * v).sum();
        assert!((lltf_nsq - 52.0).abs() < 1e-9);
        // Data field normalized as one 242-tone vector before the split.
        let data_nsq: f64 = fv.rx_data.iter().map(|v| v.norm_sqr()).sum::<f64>()
            + fv.rx_pilots.iter().map(|v| v * v).sum::<f64>();
        assert!((data_nsq - 242.0).abs() < 1e-9);
    }

    #[test]
    fn tx_pilots_pass_through() {
        let plan = TonePlan::new();
        let cap = toy_capture(1.0);
        for m in 0..2 {
            let fv = extract_features(&cap, m, &plan).unwrap();
            let expect = pilot_sequence(m);
            for (i, p) in expect.iter().enumerate() {
                assert_eq!(fv.tx_pilots[i], p.re);
                assert_eq!(fv.tx_pilots[8 + i], p.im);
            }
        }
    }

    #[test]
    fn normalization_removes_absolute_scale() {
        let plan = TonePlan::new();
        let a = extract_features(&toy_capture(1.0), 1, &plan).unwrap();
        // 6 dB amplitude difference.
        let b = extract_features(&toy_capture(2.0), 1, &plan).unwrap();
        for (x, y) in a.rx_lltf.iter().zip(&b.rx_lltf) {
            assert!((x - y).abs() < 1e-9);
        }
        for (x, y) in a.rx_heltf.iter().zip(&b.rx_heltf) {
            assert!((x - y).abs() < 1e-9);
        }
        for (x, y) in a.rx_data.iter().zip(&b.rx_data) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn out_of_range_symbol_rejected() {
        let plan = TonePlan::new();
        let cap = toy_capture(1.0);
        assert!(extract_features(&cap, 2, &plan).is_err());
    }
}
