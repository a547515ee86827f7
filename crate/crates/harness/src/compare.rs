//! Horizontal curve comparison: the SNR gain of curve A over curve B at
//! matched BER/PER levels, interpolated on a log-metric scale.

use crate::eval::{aggregate_per_snr, EvalPoint};
use crate::{HarnessError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    Ber,
    Per,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GainRow {
    pub level: f64,
    pub snr_a: f64,
    pub snr_b: f64,
    /// Positive when curve A reaches the level at a lower SNR than B.
    pub gain_db: f64,
}

const METRIC_FLOOR: f64 = 1e-12;

fn curve(rows: &[EvalPoint], metric: Metric) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = aggregate_per_snr(rows)
        .iter()
        .filter(|r| r.snr_db.is_finite())
        .map(|r| {
            let m = match metric {
                Metric::Ber => r.ber,
                Metric::Per => r.per,
            };
            (r.snr_db, m.max(METRIC_FLOOR).log10())
        })
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite snrs"));
    pts
}

/// All SNRs at which the piecewise-linear curve crosses `level` (log10).
fn crossings(pts: &[(f64, f64)], level: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if (y0 - level) * (y1 - level) <= 0.0 && y0 != y1 {
            let t = (level - y0) / (y1 - y0);
            if (0.0..=1.0).contains(&t) {
                out.push(x0 + t * (x1 - x0));
            }
        } else if y0 == level && y1 == level {
            out.push(x0);
        }
    }
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    out
}

/// Compare curve `a` against `b` at the given metric levels (or at five
/// levels spanning the curves' common range when none are given).
pub fn compare_curves(
    a: &[EvalPoint],
    b: &[EvalPoint],
    metric: Metric,
    levels: Option<Vec<f64>>,
) -> Result<Vec<GainRow>> {
    let ca = curve(a, metric);
    let cb = curve(b, metric);
    if ca.len() < 2 || cb.len() < 2 {
        return Err(HarnessError::Compare(
            "need at least two finite-SNR points per curve".into(),
        ));
    }
    let range = |c: &[(f64, f64)]| {
        let lo = c.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (alo, ahi) = range(&ca);
    let (blo, bhi) = range(&cb);
    let lo = alo.max(blo);
    let hi = ahi.min(bhi);
    if lo >= hi && levels.is_none() {
        return Err(HarnessError::Compare(
            "curves do not overlap in the metric range".into(),
        ));
    }
    let levels: Vec<f64> = match levels {
        Some(ls) => ls.iter().map(|l| l.max(METRIC_FLOOR).log10()).collect(),
        None => {
            let n = 5;
            (1..=n)
                .map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64)
                .collect()
        }
    };
    let mut rows = Vec::new();
    for level in levels {
        let xa = crossings(&ca, level);
        let xb = crossings(&cb, level);
        if let (Some(&sa), Some(&sb)) = (xa.first(), xb.first()) {
            rows.push(GainRow {
                level: 10f64.powf(level),
                snr_a: sa,
                snr_b: sb,
                gain_db: sb - sa,
            });
        }
    }
    if rows.is_empty() {
        return Err(HarnessError::Compare(
            "no common crossing levels found".into(),
        ));
    }
    Ok(rows)
}

pub fn gains_to_csv(rows: &[GainRow]) -> String {
    let mut out = String::from("level,snr_a,snr_b,gain_db\n");
    for r in rows {
        out.push_str(&format!(
            "{:.6e},{:.4},{:.4},{:.4}\n",
            r.level, r.snr_a, r.snr_b, r.gain_db
        ));
    }
    out
}
