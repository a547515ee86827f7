//! Packet assembly and the sample-index layout of an assembled packet.

use crate::ltf::{build_heltf, build_lltf, LLTF_LEN};
use crate::ofdm::{modulate_symbol, FrequencyGrid};
use crate::pilot::pilot_sequence;
use crate::plan::{FFT_SIZE, SYMBOL_LEN, TonePlan};
use crate::qam;
use crate::{FrameError, Mcs, Result};
use axphy_core::Cx;

/// Sample-index geometry of a packet with `n_data_symbols` DATA symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameLayout {
    pub n_data_symbols: usize,
}

impl FrameLayout {
    pub fn new(n_data_symbols: usize) -> Self {
        Self { n_data_symbols }
    }

    pub fn total_len(&self) -> usize {
        LLTF_LEN + SYMBOL_LEN + self.n_data_symbols * SYMBOL_LEN
    }

    pub fn lltf_range(&self) -> std::ops::Range<usize> {
        0..LLTF_LEN
    }

    /// FFT windows of the two L-LTF repetitions.
    pub fn lltf_rep_windows(&self) -> [std::ops::Range<usize>; 2] {
        [32..96, 96..160]
    }

    pub fn heltf_range(&self) -> std::ops::Range<usize> {
        LLTF_LEN..LLTF_LEN + SYMBOL_LEN
    }

    /// Start of the HE-LTF FFT window.
    pub fn heltf_window_start(&self) -> usize {
        LLTF_LEN + SYMBOL_LEN - FFT_SIZE
    }

    pub fn data_range(&self, m: usize) -> std::ops::Range<usize> {
        let s = LLTF_LEN + SYMBOL_LEN + m * SYMBOL_LEN;
        s..s + SYMBOL_LEN
    }

    /// Start of DATA symbol m's FFT window.
    pub fn data_window_start(&self, m: usize) -> usize {
        self.data_range(m).start + SYMBOL_LEN - FFT_SIZE
    }
}

/// A transmitted packet with its ground truth.
#[derive(Debug, Clone)]
pub struct HesuPacket {
    /// Full time-domain stream: L-LTF, HE-LTF, DATA symbols.
    pub samples: Vec<Cx>,
    /// The coded bit stream mapped onto data tones.
    pub tx_bits: Vec<u8>,
    /// Per symbol, the 234 transmitted data-tone points.
    pub tx_constellation: Vec<Vec<Cx>>,
    /// Per symbol, the 8 transmitted pilot values.
    pub tx_pilots: Vec<[Cx; 8]>,
    pub mcs: Mcs,
    pub layout: FrameLayout,
}

/// Map coded bits onto DATA symbols, insert pilots, modulate, and prepend
/// the training fields. `payload_bits` must hold exactly
/// `234 * log2(order) * n_data_symbols` coded bits.
pub fn assemble_packet(
    payload_bits: &[u8],
    mcs: Mcs,
    n_data_symbols: usize,
    plan: &TonePlan,
) -> Result<HesuPacket> {
    let order = mcs.order();
    let bits_per_tone = mcs.bits_per_tone();
    let expected = mcs.coded_bits_per_symbol() * n_data_symbols;
    if payload_bits.len() != expected {
        return Err(FrameError::PayloadLength {
            expected,
            got: payload_bits.len(),
        });
    }
    let layout = FrameLayout::new(n_data_symbols);
    let mut samples = Vec::with_capacity(layout.total_len());
    samples.extend(build_lltf());
    samples.extend(build_heltf(plan));

    let mut tx_constellation = Vec::with_capacity(n_data_symbols);
    let mut tx_pilots = Vec::with_capacity(n_data_symbols);
    let mut bit_cursor = 0usize;
    for m in 0..n_data_symbols {
        let mut grid = FrequencyGrid::new(FFT_SIZE);
        let mut points = Vec::with_capacity(plan.data_tones.len());
        for &k in &plan.data_tones {
            let group = &payload_bits[bit_cursor..bit_cursor + bits_per_tone];
            bit_cursor += bits_per_tone;
            let p = qam::map(group, order)?;
            grid.set_tone(k, p);
            points.push(p);
        }
        let pilots = pilot_sequence(m);
        for (&k, &v) in plan.pilot_tones.iter().zip(pilots.iter()) {
            grid.set_tone(k, v);
        }
        samples.extend(modulate_symbol(&grid)?);
        tx_constellation.push(points);
        tx_pilots.push(pilots);
    }

    Ok(HesuPacket {
        samples,
        tx_bits: payload_bits.to_vec(),
        tx_constellation,
        tx_pilots,
        mcs,
        layout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ofdm::demodulate_symbol;
    use axphy_core::rng::SeededRng;

    fn random_bits(n: usize, seed: u64) -> Vec<u8> {
        SeededRng::new(seed, 0).fill_bits(n)
    }

    #[test]
    fn bpsk_loopback_recovers_bits() {
        let plan = TonePlan::new();
        let bits = random_bits(234, 1);
        let pkt = assemble_packet(&bits, Mcs::BpskDebug, 1, &plan).unwrap();
        let grid = demodulate_symbol(&pkt.samples[pkt.layout.data_range(0)], &plan).unwrap();
        let mut recovered = Vec::new();
        for &k in &plan.data_tones {
            recovered.extend(qam::demap(grid.tone(k), 2).unwrap());
        }
        assert_eq!(recovered, bits);
    }

    #[test]
    fn mcs7_constellation_points_are_valid_64qam() {
        let plan = TonePlan::new();
        let n_sym = 2;
        let bits = random_bits(Mcs::Mcs7.coded_bits_per_symbol() * n_sym, 2);
        let pkt = assemble_packet(&bits, Mcs::Mcs7, n_sym, &plan).unwrap();
        let set = qam::constellation(64).unwrap();
        for sym in &pkt.tx_constellation {
            assert_eq!(sym.len(), 234);
            for p in sym {
                assert!(set.iter().any(|s| (s - p).norm() < 1e-12));
            }
        }
    }

    #[test]
    fn time_domain_length() {
        let plan = TonePlan::new();
        for n_sym in [1usize, 16] {
            let bits = random_bits(Mcs::Mcs7.coded_bits_per_symbol() * n_sym, 3);
            let pkt = assemble_packet(&bits, Mcs::Mcs7, n_sym, &plan).unwrap();
            assert_eq!(pkt.samples.len(), 160 + (16 + 256) + n_sym * (16 + 256));
            assert_eq!(pkt.samples.len(), pkt.layout.total_len());
        }
    }

    #[test]
    fn loopback_exact_for_all_orders() {
        let plan = TonePlan::new();
        for mcs in [Mcs::BpskDebug, Mcs::Mcs7, Mcs::Mcs8, Mcs::Mcs10] {
            let bits = random_bits(mcs.coded_bits_per_symbol() * 2, 7 + mcs.index() as u64);
            let pkt = assemble_packet(&bits, mcs, 2, &plan).unwrap();
            for m in 0..2 {
                let grid =
                    demodulate_symbol(&pkt.samples[pkt.layout.data_range(m)], &plan).unwrap();
                let rx = grid.tones(&plan.data_tones);
                for (a, b) in rx.iter().zip(&pkt.tx_constellation[m]) {
                    assert!((a - b).norm() < 1e-10);
                }
                let pil = grid.tones(&plan.pilot_tones);
                for (a, b) in pil.iter().zip(&pkt.tx_pilots[m]) {
                    assert!((a - b).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn average_data_symbol_power_matches_tone_count() {
        let plan = TonePlan::new();
        let bits = random_bits(Mcs::Mcs7.coded_bits_per_symbol() * 8, 5);
        let pkt = assemble_packet(&bits, Mcs::Mcs7, 8, &plan).unwrap();
        let mut p = 0.0;
        let mut n = 0usize;
        for m in 0..8 {
            let r = pkt.layout.data_range(m);
            p += pkt.samples[r.clone()].iter().map(|v| v.norm_sqr()).sum::<f64>();
            n += r.len();
        }
        let avg = p / n as f64;
        let expect = 242.0 / 256.0;
        assert!((avg - expect).abs() < 0.02 * expect, "avg power {avg}");
    }

    #[test]
    fn wrong_payload_length_rejected() {
        let plan = TonePlan::new();
        assert!(assemble_packet(&[0; 10], Mcs::Mcs7, 1, &plan).is_err());
    }
}
