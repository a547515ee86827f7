//! Max-log soft demapping. Per bit b the LLR is
//! rho * (min over S1 of |x - s|^2 - min over S0 of |x - s|^2) with
//! rho = |h|^2 / sigma^2, so positive means bit 0 is more likely and the
//! per-tone reliability scales with the equalized channel strength.

use axphy_core::Cx;
use axphy_frame::qam;

/// LLRs for one equalized point, most-significant bit first (I axis bits,
/// then Q axis bits, matching the mapper's bit order).
pub fn soft_demap(x_hat: Cx, h_d: Cx, sigma2: f64, order: usize) -> Vec<f64> {
    debug_assert!(sigma2 > 0.0);
    let rho = h_d.norm_sqr() / sigma2;
    let table = qam::axis_table(order).expect("supported order");
    if order == 2 {
        return vec![axis_llrs(x_hat.re, &table, 1, rho)[0]];
    }
    let half = qam::bits_per_point(order).expect("supported order") / 2;
    let mut out = axis_llrs(x_hat.re, &table, half, rho);
    out.extend(axis_llrs(x_hat.im, &table, half, rho));
    out
}

fn axis_llrs(x: f64, table: &[(f64, u32)], n_bits: usize, rho: f64) -> Vec<f64> {
    (0..n_bits)
        .map(|j| {
            let bit_mask = 1u32 << (n_bits - 1 - j);
            let mut min0 = f64::INFINITY;
            let mut min1 = f64::INFINITY;
            for &(a, g) in table {
                let d = (x - a) * (x - a);
                if g & bit_mask == 0 {
                    min0 = min0.min(d);
                } else {
                    min1 = min1.min(d);
                }
            }
            rho * (min1 - min0)
        })
        .collect()
}
