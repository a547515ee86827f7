//! Counter-based random streams.
//!
//! One generator is keyed by `(seed, stream)` where the stream id mixes the
//! packet index and a stage tag, so payload, channel, noise and impairment
//! draws are independent streams that can be replayed per packet regardless
//! of scheduling order. The output function is the SplitMix64 finalizer over
//! an incrementing counter, which is identical on every platform.

use crate::Cx;

/// Stage tags used to derive independent per-packet streams.
pub mod stage {
    pub const PAYLOAD: u64 = 1;
    pub const CHANNEL: u64 = 2;
    pub const NOISE: u64 = 3;
    pub const CLOCK: u64 = 4;
    pub const OSCILLATOR: u64 = 5;
    pub const INIT: u64 = 6;
    pub const SHUFFLE: u64 = 7;
    pub const LTF: u64 = 8;
    pub const EVAL: u64 = 9;
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic stream keyed by `(seed, stream)`.
#[derive(Debug, Clone)]
pub struct SeededRng {
    base: u64,
    counter: u64,
    spare_gauss: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let base = mix64(mix64(seed) ^ mix64(stream.wrapping_mul(0xA24B_AED4_963E_E407)));
        Self {
            base,
            counter: 0,
            spare_gauss: None,
        }
    }

    /// Stream for one stage of one packet under a master seed.
    pub fn for_packet(seed: u64, packet_index: u64, stage: u64) -> Self {
        let stream = mix64(packet_index.wrapping_mul(GAMMA)) ^ stage.wrapping_mul(0x9FB2_1C65_1E98_DF25);
        Self::new(seed, stream)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.base.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gauss.take() {
            return z;
        }
        let mut u1 = self.next_f64();
        if u1 < 1e-300 {
            u1 = 1e-300;
        }
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let ang = 2.0 * std::f64::consts::PI * u2;
        self.spare_gauss = Some(r * ang.sin());
        r * ang.cos()
    }

    /// Circularly-symmetric complex Gaussian with total variance `var`
    /// (var/2 in each component).
    pub fn complex_gaussian(&mut self, var: f64) -> Cx {
        let s = (var / 2.0).sqrt();
        Cx::new(s * self.gaussian(), s * self.gaussian())
    }

    /// One random bit.
    pub fn bit(&mut self) -> u8 {
        (self.next_u64() >> 63) as u8
    }

    pub fn fill_bits(&mut self, n: usize) -> Vec<u8> {
        (0..n).map(|_| self.bit()).collect()
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = (self.next_u64() % (i as u64 + 1)) as usize;
            items.swap(i, j);
        }
    }
}
