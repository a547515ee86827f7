//! RF impairment chains. Type I enables only analog filtering; Type II adds
//! sample clock offset, phase noise and PA nonlinearity; Type III enables
//! all five including residual CFO. The full link order is PA and analog
//! filter on the transmit side, then the channel, then SRO and CFO/phase
//! noise on the receive side; `apply_chain` composes both halves
//! back-to-back for a transparent channel.

pub mod filter;
pub mod oscillator;
pub mod pa;
pub mod sro;

use axphy_core::rng::SeededRng;
use axphy_core::Cx;
use axphy_frame::FrameLayout;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImpairmentType {
    /// No impairment at all (loopback and genie tests).
    Off,
    TypeI,
    TypeII,
    TypeIII,
}

impl ImpairmentType {
    pub const ALL: [ImpairmentType; 3] =
        [ImpairmentType::TypeI, ImpairmentType::TypeII, ImpairmentType::TypeIII];

    pub fn index(self) -> u8 {
        match self {
            ImpairmentType::Off => 0,
            ImpairmentType::TypeI => 1,
            ImpairmentType::TypeII => 2,
            ImpairmentType::TypeIII => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(ImpairmentType::Off),
            1 => Some(ImpairmentType::TypeI),
            2 => Some(ImpairmentType::TypeII),
            3 => Some(ImpairmentType::TypeIII),
            _ => None,
        }
    }

    fn filter_on(self) -> bool {
        self != ImpairmentType::Off
    }

    fn sro_on(self) -> bool {
        matches!(self, ImpairmentType::TypeII | ImpairmentType::TypeIII)
    }

    fn cfo_on(self) -> bool {
        self == ImpairmentType::TypeIII
    }

    fn phase_noise_on(self) -> bool {
        matches!(self, ImpairmentType::TypeII | ImpairmentType::TypeIII)
    }

    fn pa_on(self) -> bool {
        matches!(self, ImpairmentType::TypeII | ImpairmentType::TypeIII)
    }
}

/// Impairment magnitudes. The clock draw (+-clock_ppm, once per packet)
/// drives the SRO; the residual CFO models what remains after coarse
/// synchronization; phase-noise values are placeholders for the usual
/// oscillator mask and are recorded in provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImpairmentConfig {
    pub type_id: ImpairmentType,
    pub clock_ppm: f64,
    pub residual_cfo_hz: f64,
    pub phase_noise_level_dbchz: f64,
    pub phase_noise_corner_hz: f64,
    pub pa_backoff_db: f64,
    pub pa_smoothness: f64,
    pub filter_taps: Vec<f64>,
}

impl ImpairmentConfig {
    pub fn for_type(type_id: ImpairmentType) -> Self {
        Self {
            type_id,
            clock_ppm: 20.0,
            residual_cfo_hz: 300.0,
            phase_noise_level_dbchz: -100.0,
            phase_noise_corner_hz: 100e3,
            pa_backoff_db: 8.0,
            pa_smoothness: 3.0,
            filter_taps: filter::design_lowpass(filter::DEFAULT_TAPS, filter::DEFAULT_CUTOFF),
        }
    }

    /// All magnitudes zeroed; with Type III this degenerates to Type I.
    pub fn zero_magnitudes(type_id: ImpairmentType) -> Self {
        Self {
            clock_ppm: 0.0,
            residual_cfo_hz: 0.0,
            phase_noise_level_dbchz: f64::NEG_INFINITY,
            pa_backoff_db: f64::INFINITY,
            ..Self::for_type(type_id)
        }
    }
}

/// Ground truth applied to one packet, in the same sign convention the
/// receiver estimates: per-symbol timing offset tau grows as
/// sro_ratio * (symbol time - HE-LTF time) and the per-symbol common phase
/// error is `cpe_per_symbol[m]`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GenieOffsets {
    /// Timing drift ratio (seconds of drift per second), constant per packet.
    pub sro_ratio: f64,
    /// CPE of each DATA symbol relative to the HE-LTF, radians.
    pub cpe_per_symbol: Vec<f64>,
    /// Applied residual carrier offset in Hz.
    pub cfo_hz: f64,
    /// Clock offset drawn for this packet, in ppm.
    pub clock_ppm: f64,
}

/// Transmit-side stages for the given type: PA, then analog filter.
pub fn apply_tx_stages(x: &[Cx], config: &ImpairmentConfig) -> Vec<Cx> {
    let mut y = x.to_vec();
    if config.type_id.pa_on() {
        y = pa::apply_pa(&y, config.pa_backoff_db, config.pa_smoothness);
    }
    if config.type_id.filter_on() {
        y = filter::apply_analog_filter(&y, &config.filter_taps);
    }
    y
}

/// Receive-side stages for the given type: SRO, then CFO plus phase noise.
/// `layout` locates the FFT windows used for genie CPE bookkeeping and
/// `rng` must be the packet's dedicated oscillator stream.
pub fn apply_rx_stages(
    x: &[Cx],
    config: &ImpairmentConfig,
    layout: &FrameLayout,
    clock_rng: &mut SeededRng,
    osc_rng: &mut SeededRng,
) -> (Vec<Cx>, GenieOffsets) {
    let mut offsets = GenieOffsets {
        cpe_per_symbol: vec![0.0; layout.n_data_symbols],
        ..Default::default()
    };
    let mut y = x.to_vec();
    if config.type_id.sro_on() && config.clock_ppm != 0.0 {
        let ppm = clock_rng.uniform(-config.clock_ppm, config.clock_ppm);
        offsets.clock_ppm = ppm;
        let (resampled, ratio) = sro::apply_sro(&y, ppm);
        y = resampled;
        offsets.sro_ratio = ratio;
    }
    let cfo = if config.type_id.cfo_on() && config.residual_cfo_hz != 0.0 {
        osc_rng.uniform(-config.residual_cfo_hz, config.residual_cfo_hz)
    } else {
        0.0
    };
    let pn_on = config.type_id.phase_noise_on() && config.phase_noise_level_dbchz.is_finite();
    if cfo != 0.0 || pn_on {
        let level = if pn_on {
            config.phase_noise_level_dbchz
        } else {
            f64::NEG_INFINITY
        };
        let (rotated, cpe) = oscillator::apply_cfo_and_phase_noise(
            &y,
            cfo,
            level,
            config.phase_noise_corner_hz,
            layout,
            osc_rng,
        );
        y = rotated;
        offsets.cpe_per_symbol = cpe;
        offsets.cfo_hz = cfo;
    }
    (y, offsets)
}

/// The whole chain back-to-back (no channel in between): PA, filter, SRO,
/// CFO + phase noise, honoring the type's enabled set.
pub fn apply_chain(
    x: &[Cx],
    config: &ImpairmentConfig,
    layout: &FrameLayout,
    clock_rng: &mut SeededRng,
    osc_rng: &mut SeededRng,
) -> (Vec<Cx>, GenieOffsets) {
    let tx = apply_tx_stages(x, config);
    apply_rx_stages(&tx, config, layout, clock_rng, osc_rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use axphy_core::rng::{stage, SeededRng};

    fn rngs() -> (SeededRng, SeededRng) {
        (
            SeededRng::for_packet(7, 0, stage::CLOCK),
            SeededRng::for_packet(7, 0, stage::OSCILLATOR),
        )
    }

    fn test_signal(n: usize) -> Vec<Cx> {
        let mut r = SeededRng::new(3, 3);
        (0..n).map(|_| r.complex_gaussian(1.0)).collect()
    }

    #[test]
    fn type_i_filters_only_and_offsets_stay_zero() {
        let cfg = ImpairmentConfig::for_type(ImpairmentType::TypeI);
        let layout = FrameLayout::new(2);
        let x = test_signal(layout.total_len());
        let (mut c1, mut c2) = rngs();
        let (y, off) = apply_chain(&x, &cfg, &layout, &mut c1, &mut c2);
        let filtered = filter::apply_analog_filter(&x, &cfg.filter_taps);
        assert_eq!(y, filtered);
        assert_eq!(off.sro_ratio, 0.0);
        assert_eq!(off.cfo_hz, 0.0);
        assert!(off.cpe_per_symbol.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn type_ii_has_no_cfo() {
        let cfg = ImpairmentConfig::for_type(ImpairmentType::TypeII);
        let layout = FrameLayout::new(2);
        let x = test_signal(layout.total_len());
        let (mut c1, mut c2) = rngs();
        let (_, off) = apply_chain(&x, &cfg, &layout, &mut c1, &mut c2);
        assert_eq!(off.cfo_hz, 0.0);
        assert_ne!(off.sro_ratio, 0.0);
    }

    #[test]
    fn type_iii_with_zero_magnitudes_equals_type_i() {
        let layout = FrameLayout::new(2);
        let x = test_signal(layout.total_len());
        let zero = ImpairmentConfig::zero_magnitudes(ImpairmentType::TypeIII);
        let (mut c1, mut c2) = rngs();
        let (y3, off) = apply_chain(&x, &zero, &layout, &mut c1, &mut c2);
        let one = ImpairmentConfig::for_type(ImpairmentType::TypeI);
        let (mut c1, mut c2) = rngs();
        let (y1, _) = apply_chain(&x, &one, &layout, &mut c1, &mut c2);
        assert_eq!(off.sro_ratio, 0.0);
        for (a, b) in y3.iter().zip(&y1) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn off_type_is_identity() {
        let layout = FrameLayout::new(1);
        let x = test_signal(layout.total_len());
        let cfg = ImpairmentConfig::for_type(ImpairmentType::Off);
        let (mut c1, mut c2) = rngs();
        let (y, off) = apply_chain(&x, &cfg, &layout, &mut c1, &mut c2);
        assert_eq!(x, y);
        assert_eq!(off.sro_ratio, 0.0);
    }
}
