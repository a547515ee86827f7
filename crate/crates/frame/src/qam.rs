//! Gray-mapped square QAM scaled to unit average energy, plus the hard
//! demapper. Orders 64/256/1024 are square constellations with independent
//! I/Q axes; order 2 is BPSK on the real axis (bit 0 -> +1, bit 1 -> -1).

use crate::{FrameError, Result};
use axphy_core::Cx;

pub const SUPPORTED_ORDERS: [usize; 4] = [2, 64, 256, 1024];

pub fn is_supported(order: usize) -> bool {
    SUPPORTED_ORDERS.contains(&order)
}

/// Bits per point.
pub fn bits_per_point(order: usize) -> Result<usize> {
    if !is_supported(order) {
        return Err(FrameError::UnsupportedOrder(order));
    }
    Ok(order.trailing_zeros() as usize)
}

/// Per-axis amplitude scale giving unit average point energy.
pub fn axis_scale(order: usize) -> f64 {
    if order == 2 {
        1.0
    } else {
        (3.0 / (2.0 * (order as f64 - 1.0))).sqrt()
    }
}

#[inline]
fn binary_to_gray(v: u32) -> u32 {
    v ^ (v >> 1)
}

#[inline]
fn gray_to_binary(mut g: u32) -> u32 {
    let mut v = g;
    while g > 0 {
        g >>= 1;
        v ^= g;
    }
    v
}

fn bits_to_int(bits: &[u8]) -> u32 {
    bits.iter().fold(0u32, |acc, &b| (acc << 1) | (b as u32 & 1))
}

fn int_to_bits(v: u32, n: usize, out: &mut Vec<u8>) {
    for i in (0..n).rev() {
        out.push(((v >> i) & 1) as u8);
    }
}

/// Map one axis bit group (MSB first, Gray labelled) to its level amplitude
/// before scaling: levels are -(L-1), ..., -1, +1, ..., +(L-1).
fn axis_map(bits_int: u32, levels: u32) -> f64 {
    let v = gray_to_binary(bits_int);
    (2.0 * v as f64) - (levels as f64 - 1.0)
}

/// Nearest-level decision on one axis. On an exact midpoint the level whose
/// Gray bit group is the smaller integer wins.
fn axis_demap(x: f64, levels: u32) -> u32 {
    let u = (x + (levels as f64 - 1.0)) / 2.0;
    let lo = (u.floor().max(0.0) as u32).min(levels - 1);
    let hi = (lo + 1).min(levels - 1);
    if lo == hi {
        return binary_to_gray(lo);
    }
    let dlo = (u - lo as f64).abs();
    let dhi = (hi as f64 - u).abs();
    if dlo < dhi {
        binary_to_gray(lo)
    } else if dhi < dlo {
        binary_to_gray(hi)
    } else {
        binary_to_gray(lo).min(binary_to_gray(hi))
    }
}

/// Map a bit group of length log2(order) onto a constellation point.
pub fn map(bits: &[u8], order: usize) -> Result<Cx> {
    let n = bits_per_point(order)?;
    if bits.len() != n {
        return Err(FrameError::BitGroupLength {
            expected: n,
            got: bits.len(),
        });
    }
    if order == 2 {
        return Ok(Cx::new(if bits[0] == 0 { 1.0 } else { -1.0 }, 0.0));
    }
    let half = n / 2;
    let levels = 1u32 << half;
    let s = axis_scale(order);
    let i = axis_map(bits_to_int(&bits[..half]), levels) * s;
    let q = axis_map(bits_to_int(&bits[half..]), levels) * s;
    Ok(Cx::new(i, q))
}

/// Hard decision back to the Gray bit group.
pub fn demap(point: Cx, order: usize) -> Result<Vec<u8>> {
    let n = bits_per_point(order)?;
    let mut out = Vec::with_capacity(n);
    if order == 2 {
        // Midpoint 0.0 resolves to bit 0 (+1), the lower Gray index.
        out.push(if point.re >= 0.0 { 0 } else { 1 });
        return Ok(out);
    }
    let half = n / 2;
    let levels = 1u32 << half;
    let s = axis_scale(order);
    int_to_bits(axis_demap(point.re / s, levels), half, &mut out);
    int_to_bits(axis_demap(point.im / s, levels), half, &mut out);
    Ok(out)
}

/// All `order` constellation points indexed by their bit-group integer.
pub fn constellation(order: usize) -> Result<Vec<Cx>> {
    let n = bits_per_point(order)?;
    let mut pts = Vec::with_capacity(order);
    let mut bits = Vec::with_capacity(n);
    for v in 0..order as u32 {
        bits.clear();
        int_to_bits(v, n, &mut bits);
        pts.push(map(&bits, order)?);
    }
    Ok(pts)
}

/// Per-axis (amplitude, axis bit group) pairs in level order, used by the
/// soft demapper. BPSK reports its two real levels.
pub fn axis_table(order: usize) -> Result<Vec<(f64, u32)>> {
    bits_per_point(order)?;
    if order == 2 {
        return Ok(vec![(1.0, 0), (-1.0, 1)]);
    }
    let levels = 1u32 << (bits_per_point(order)? / 2);
    let s = axis_scale(order);
    Ok((0..levels)
        .map(|v| ((2.0 * v as f64 - (levels as f64 - 1.0)) * s, binary_to_gray(v)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpsk_convention() {
        assert_eq!(map(&[0], 2).unwrap(), Cx::new(1.0, 0.0));
        assert_eq!(map(&[1], 2).unwrap(), Cx::new(-1.0, 0.0));
        assert_eq!(demap(Cx::new(0.3, 0.0), 2).unwrap(), vec![0]);
        // Exact midpoint resolves toward the lower Gray index (bit 0).
        assert_eq!(demap(Cx::new(0.0, 0.0), 2).unwrap(), vec![0]);
    }

    #[test]
    fn unit_mean_power_by_enumeration() {
        for order in [64usize, 256, 1024] {
            let pts = constellation(order).unwrap();
            let p: f64 = pts.iter().map(|c| c.norm_sqr()).sum::<f64>() / order as f64;
            assert!((p - 1.0).abs() < 1e-12, "order {order}: mean power {p}");
        }
    }

    #[test]
    fn exhaustive_round_trip_all_orders() {
        for order in SUPPORTED_ORDERS {
            let n = bits_per_point(order).unwrap();
            for v in 0..order as u32 {
                let mut bits = Vec::new();
                int_to_bits(v, n, &mut bits);
                let p = map(&bits, order).unwrap();
                assert_eq!(demap(p, order).unwrap(), bits, "order {order} group {v}");
            }
        }
    }

    #[test]
    fn gray_neighbors_differ_in_one_bit() {
        // Adjacent levels on an axis differ by exactly one bit.
        for order in [64usize, 256, 1024] {
            let table = axis_table(order).unwrap();
            for w in table.windows(2) {
                assert_eq!((w[0].1 ^ w[1].1).count_ones(), 1);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(map(&[0, 1], 32).is_err());
        assert!(map(&[0, 1, 0], 64).is_err());
    }
}
