//! Channel estimation over the 242 active tones: raw least squares from
//! the HE-LTF, frequency smoothing, and a time-domain LS that projects the
//! estimate onto a few impulse-response taps.

use crate::{Result, RxError};
use axphy_core::Cx;
use axphy_frame::ofdm::FrequencyGrid;
use axphy_frame::plan::{FFT_SIZE, TonePlan};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorMethod {
    Ls,
    LsSmoothed(usize),
    LsTimeDomain(usize),
}

/// Channel estimate over the active tones (ascending tone order) plus the
/// noise variance used downstream by the MMSE equalizer.
#[derive(Debug, Clone)]
pub struct ChannelEstimate {
    pub h_hat: Vec<Cx>,
    pub sigma2: f64,
    pub method: EstimatorMethod,
}

impl ChannelEstimate {
    /// Value at signed tone index `k`.
    pub fn at(&self, k: i32, plan: &TonePlan) -> Cx {
        match plan.active_tones.binary_search(&k) {
            Ok(i) => self.h_hat[i],
            Err(_) => Cx::new(0.0, 0.0),
        }
    }
}

/// Raw LS: h_hat[k] = y_T[k] * conj(x_T[k]), valid because |x_T| = 1.
pub fn ls_channel_estimate(
    rx_heltf_grid: &FrequencyGrid,
    known_heltf: &[Cx],
    plan: &TonePlan,
) -> ChannelEstimate {
    let h_hat = plan
        .active_tones
        .iter()
        .zip(known_heltf)
        .map(|(&k, x)| rx_heltf_grid.tone(k) * x.conj())
        .collect();
    ChannelEstimate {
        h_hat,
        sigma2: 0.0,
        method: EstimatorMethod::Ls,
    }
}

/// Moving average across active-tone neighbors. The window spans tones on
/// the same side of DC and shrinks at the band edges and at the DC gap;
/// span 1 is the identity.
pub fn smooth_frequency(est: &ChannelEstimate, span: usize, plan: &TonePlan) -> Result<ChannelEstimate> {
    if span % 2 == 0 {
        return Err(RxError::EvenSpan(span));
    }
    if !(1..=31).contains(&span) {
        return Err(RxError::SpanRange(span));
    }
    let half = span / 2;
    let n = est.h_hat.len();
    // Active tones -122..=-2 occupy indices 0..=120, 2..=122 occupy 121..=241.
    let split = plan
        .active_tones
        .iter()
        .position(|&k| k > 0)
        .unwrap_or(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = if i < split { (0, split) } else { (split, n) };
        let a = i.saturating_sub(half).max(lo);
        let b = (i + half + 1).min(hi);
        let sum: Cx = est.h_hat[a..b].iter().sum();
        out.push(sum / (b - a) as f64);
    }
    Ok(ChannelEstimate {
        h_hat: out,
        sigma2: est.sigma2,
        method: EstimatorMethod::LsSmoothed(span),
    })
}

/// Time-domain LS: solve min || y - diag(x) F g ||^2 for `n_taps` impulse
/// response taps over the active rows of the DFT matrix, then return
/// h_hat = F g. Errors out when the normal matrix condition estimate
/// exceeds 1e12.
pub fn time_domain_ls_estimate(
    rx_heltf_grid: &FrequencyGrid,
    known_heltf: &[Cx],
    n_taps: usize,
    plan: &TonePlan,
) -> Result<ChannelEstimate> {
    if !(1..=16).contains(&n_taps) {
        return Err(RxError::TapRange(n_taps));
    }
    let tones = &plan.active_tones;
    let m = tones.len();
    // A[i][t] = x[k_i] * exp(-j 2 pi bin(k_i) t / N)
    let mut a = vec![vec![Cx::new(0.0, 0.0); n_taps]; m];
    for (i, (&k, x)) in tones.iter().zip(known_heltf).enumerate() {
        let bin = TonePlan::bin(k) as f64;
        for (t, at) in a[i].iter_mut().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * bin * t as f64 / FFT_SIZE as f64;
            *at = x * Cx::from_polar(1.0, ang);
        }
    }
    // Normal equations.
    let mut gram = vec![vec![Cx::new(0.0, 0.0); n_taps]; n_taps];
    let mut rhs = vec![Cx::new(0.0, 0.0); n_taps];
    for (i, &k) in tones.iter().enumerate() {
        let y = rx_heltf_grid.tone(k);
        for t in 0..n_taps {
            rhs[t] += a[i][t].conj() * y;
            for u in t..n_taps {
                gram[t][u] += a[i][t].conj() * a[i][u];
            }
        }
    }
    for t in 0..n_taps {
        for u in 0..t {
            gram[t][u] = gram[u][t].conj();
        }
    }
    let g = cholesky_solve(&gram, &rhs)?;
    // h_hat = F g on the active tones.
    let h_hat = tones
        .iter()
        .map(|&k| {
            let bin = TonePlan::bin(k) as f64;
            (0..n_taps)
                .map(|t| {
                    let ang = -2.0 * std::f64::consts::PI * bin * t as f64 / FFT_SIZE as f64;
                    g[t] * Cx::from_polar(1.0, ang)
                })
                .sum()
        })
        .collect();
    Ok(ChannelEstimate {
        h_hat,
        sigma2: 0.0,
        method: EstimatorMethod::LsTimeDomain(n_taps),
    })
}

/// Hermitian positive-definite solve via Cholesky, with a condition
/// estimate from the factor's diagonal spread.
fn cholesky_solve(m: &[Vec<Cx>], b: &[Cx]) -> Result<Vec<Cx>> {
    let n = m.len();
    let mut l = vec![vec![Cx::new(0.0, 0.0); n]; n];
    for j in 0..n {
        let mut d = m[j][j].re;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        if d <= 0.0 {
            return Err(RxError::IllConditioned(f64::INFINITY));
        }
        l[j][j] = Cx::new(d.sqrt(), 0.0);
        for i in (j + 1)..n {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / l[j][j].re;
        }
    }
    let diag_max = (0..n).map(|i| l[i][i].re).fold(0.0, f64::max);
    let diag_min = (0..n).map(|i| l[i][i].re).fold(f64::INFINITY, f64::min);
    let cond = (diag_max / diag_min).powi(2);
    if cond > 1e12 {
        return Err(RxError::IllConditioned(cond));
    }
    // Forward then backward substitution.
    let mut y = vec![Cx::new(0.0, 0.0); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i].re;
    }
    let mut x = vec![Cx::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k][i].conj() * x[k];
        }
        x[i] = s / l[i][i].re;
    }
    Ok(x)
}
