//! Tapped-delay-line indoor channel models.
//!
//! Each model draws Rayleigh taps on a 10 ns grid organized in clusters:
//! within a cluster the tap power decays as exp(-delta/ds) with ds the
//! model delay spread, cluster c starts at 2*ds*c and is attenuated 6 dB
//! per cluster index, and powers overlap-add where clusters share a delay.
//! The 10 ns taps are placed onto the 50 ns sample grid with a truncated
//! sinc kernel and the result is normalized to unit energy.

use axphy_core::{fft, rng::SeededRng, Cx};
use axphy_frame::plan::{FFT_SIZE, SAMPLE_PERIOD_S};
use serde::{Deserialize, Serialize};

pub const TAP_SPACING_NS: f64 = 10.0;
const SAMPLE_NS: f64 = SAMPLE_PERIOD_S * 1e9;
/// Half-width of the truncated sinc placement kernel, in samples.
const SINC_HALF_WIDTH: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelModelId {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl ChannelModelId {
    pub const ALL: [ChannelModelId; 6] = [
        ChannelModelId::A,
        ChannelModelId::B,
        ChannelModelId::C,
        ChannelModelId::D,
        ChannelModelId::E,
        ChannelModelId::F,
    ];

    pub fn letter(self) -> char {
        match self {
            ChannelModelId::A => 'a',
            ChannelModelId::B => 'b',
            ChannelModelId::C => 'c',
            ChannelModelId::D => 'd',
            ChannelModelId::E => 'e',
            ChannelModelId::F => 'f',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'a' => Some(ChannelModelId::A),
            'b' => Some(ChannelModelId::B),
            'c' => Some(ChannelModelId::C),
            'd' => Some(ChannelModelId::D),
            'e' => Some(ChannelModelId::E),
            'f' => Some(ChannelModelId::F),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get(i as usize).copied()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub start_delay_ns: f64,
    pub tap_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelModelSpec {
    pub id: ChannelModelId,
    pub delay_spread_ns: f64,
    pub clusters: Vec<ClusterSpec>,
    pub tap_spacing_ns: f64,
}

impl ChannelModelSpec {
    /// Model rows: delay spread and taps per cluster, with cluster start
    /// delays at twice the delay spread per cluster index.
    pub fn for_model(id: ChannelModelId) -> Self {
        let (ds, taps): (f64, &[usize]) = match id {
            ChannelModelId::A => (0.0, &[1]),
            ChannelModelId::B => (15.0, &[5, 7]),
            ChannelModelId::C => (30.0, &[10, 8]),
            ChannelModelId::D => (50.0, &[16, 7, 4]),
            ChannelModelId::E => (100.0, &[15, 12, 7, 4]),
            ChannelModelId::F => (150.0, &[15, 12, 7, 3, 2, 2]),
        };
        let clusters = taps
            .iter()
            .enumerate()
            .map(|(c, &n)| ClusterSpec {
                start_delay_ns: 2.0 * ds * c as f64,
                tap_count: n,
            })
            .collect();
        Self {
            id,
            delay_spread_ns: ds,
            clusters,
            tap_spacing_ns: TAP_SPACING_NS,
        }
    }

    /// All (delay_ns, linear power weight) pairs before normalization,
    /// overlap-added at shared delays.
    pub fn power_profile(&self) -> Vec<(f64, f64)> {
        let mut profile: Vec<(i64, f64)> = Vec::new();
        for (c, cluster) in self.clusters.iter().enumerate() {
            let atten = 0.25_f64.powi(c as i32);
            for t in 0..cluster.tap_count {
                let delay = cluster.start_delay_ns + t as f64 * self.tap_spacing_ns;
                let w = if self.delay_spread_ns > 0.0 {
                    atten * (-(t as f64 * self.tap_spacing_ns) / self.delay_spread_ns).exp()
                } else {
                    1.0
                };
                let key = delay.round() as i64;
                match profile.iter_mut().find(|(d, _)| *d == key) {
                    Some((_, p)) => *p += w,
                    None => profile.push((key, w)),
                }
            }
        }
        profile.sort_by_key(|(d, _)| *d);
        profile.into_iter().map(|(d, p)| (d as f64, p)).collect()
    }
}

/// One block-fading draw: the physical 10 ns taps, the sample-grid FIR used
/// for convolution, and the cached 256-point frequency response.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// (delay_ns, complex gain) on the 10 ns grid, unit total power.
    pub physical_taps: Vec<(f64, Cx)>,
    /// Sample-spaced impulse response, normalized to unit energy.
    pub taps: Vec<Cx>,
    /// Unnormalized 256-point DFT of `taps`.
    pub freq_response: Vec<Cx>,
}

impl ChannelRealization {
    /// Per-draw RMS delay spread of the physical taps, in ns.
    pub fn rms_delay_spread_ns(&self) -> f64 {
        let p: f64 = self.physical_taps.iter().map(|(_, g)| g.norm_sqr()).sum();
        let m1: f64 = self
            .physical_taps
            .iter()
            .map(|(d, g)| d * g.norm_sqr())
            .sum::<f64>()
            / p;
        let m2: f64 = self
            .physical_taps
            .iter()
            .map(|(d, g)| d * d * g.norm_sqr())
            .sum::<f64>()
            / p;
        (m2 - m1 * m1).max(0.0).sqrt()
    }

    /// Identity channel (single unit tap, zero phase).
    pub fn identity() -> Self {
        Self::from_fir(vec![Cx::new(1.0, 0.0)], vec![(0.0, Cx::new(1.0, 0.0))])
    }

    fn from_fir(taps: Vec<Cx>, physical: Vec<(f64, Cx)>) -> Self {
        let mut padded = vec![Cx::new(0.0, 0.0); FFT_SIZE];
        for (i, t) in taps.iter().enumerate() {
            if i < FFT_SIZE {
                padded[i] = *t;
            }
        }
        let freq = fft::fft(&padded, FFT_SIZE).expect("FFT_SIZE is a power of two");
        Self {
            physical_taps: physical,
            taps,
            freq_response: freq,
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Draw one realization. Model a is a single unit tap with uniform phase;
/// other models draw independent complex Gaussian taps with the cluster
/// power profile, then project onto the sample grid and normalize.
pub fn draw_channel(spec: &ChannelModelSpec, rng: &mut SeededRng) -> ChannelRealization {
    if spec.id == ChannelModelId::A {
        let phase = rng.uniform(0.0, 2.0 * std::f64::consts::PI);
        let g = Cx::from_polar(1.0, phase);
        return ChannelRealization::from_fir(vec![g], vec![(0.0, g)]);
    }
    let profile = spec.power_profile();
    let mut physical: Vec<(f64, Cx)> = profile
        .iter()
        .map(|&(d, p)| (d, rng.complex_gaussian(p)))
        .collect();
    // Normalize physical taps to unit total power.
    let total: f64 = physical.iter().map(|(_, g)| g.norm_sqr()).sum();
    let scale = 1.0 / total.sqrt();
    for (_, g) in &mut physical {
        *g *= scale;
    }
    // Sinc placement onto the 50 ns sample grid.
    let max_delay_samples = physical
        .iter()
        .map(|(d, _)| d / SAMPLE_NS)
        .fold(0.0, f64::max);
    let fir_len = (max_delay_samples.ceil() as i64 + SINC_HALF_WIDTH + 1) as usize;
    let mut fir = vec![Cx::new(0.0, 0.0); fir_len];
    for &(d, g) in &physical {
        let center = d / SAMPLE_NS;
        let base = center.floor() as i64;
        for n in (base - SINC_HALF_WIDTH)..=(base + SINC_HALF_WIDTH + 1) {
            if n < 0 || n as usize >= fir_len {
                continue;
            }
            fir[n as usize] += g * sinc(n as f64 - center);
        }
    }
    let e: f64 = fir.iter().map(|t| t.norm_sqr()).sum();
    let s = 1.0 / e.sqrt();
    for t in &mut fir {
        *t *= s;
    }
    ChannelRealization::from_fir(fir, physical)
}

/// Linear convolution with the sample-grid taps, truncated to the input
/// length (block fading: one realization per packet).
pub fn apply_channel(tx: &[Cx], ch: &ChannelRealization) -> Vec<Cx> {
    let mut out = vec![Cx::new(0.0, 0.0); tx.len()];
    for (t, &g) in ch.taps.iter().enumerate() {
        if g.norm_sqr() == 0.0 {
            continue;
        }
        for n in t..tx.len() {
            out[n] += g * tx[n - t];
        }
    }
    out
}
