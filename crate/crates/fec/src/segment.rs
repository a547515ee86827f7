//! Payload segmentation: split the payload into full codewords, zero-pad
//! the final info block, concatenate, and fill the coded tail so the
//! stream exactly fills `234 * log2(order) * n_symbols` tone bits in
//! natural order (no tone interleaver).
//!
//! The tail is NOT zero-filled: a run of identical bits maps every tail
//! tone to the same constellation point, which turns the final OFDM
//! symbol into a near-impulse that any PA model clips into garbage. The
//! tail instead carries a fixed, published pseudo-random pad sequence that
//! both ends know; the decoder never looks at it.

use crate::code::LdpcCode;
use crate::{FecError, Result};
use axphy_core::rng::SeededRng;
use axphy_frame::Mcs;

/// Seed of the pinned tail pad sequence.
pub const TAIL_PAD_SEED: u64 = 0x0A11_7411_FEC5_EED5;

/// The first `n` bits of the pinned tail pad sequence.
pub fn tail_pad(n: usize) -> Vec<u8> {
    SeededRng::new(TAIL_PAD_SEED, 0).fill_bits(n)
}

/// Coded bits carried by `n_symbols` DATA symbols at this MCS.
pub fn coded_bits_for(mcs: Mcs, n_symbols: usize) -> usize {
    mcs.coded_bits_per_symbol() * n_symbols
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentPlan {
    pub coded_len: usize,
    pub n_codewords: usize,
    pub info_capacity: usize,
    pub tail_bits: usize,
}

impl SegmentPlan {
    pub fn new(code: &LdpcCode, n_symbols: usize, mcs: Mcs) -> Self {
        let coded_len = coded_bits_for(mcs, n_symbols);
        let n_codewords = coded_len / code.n;
        Self {
            coded_len,
            n_codewords,
            info_capacity: n_codewords * code.k,
            tail_bits: coded_len - n_codewords * code.n,
        }
    }
}

/// Encode `payload_bits` into the coded stream for one packet.
pub fn segment_and_pad(
    payload_bits: &[u8],
    code: &LdpcCode,
    n_symbols: usize,
    mcs: Mcs,
) -> Result<Vec<u8>> {
    let plan = SegmentPlan::new(code, n_symbols, mcs);
    if payload_bits.len() > plan.info_capacity {
        return Err(FecError::PayloadTooLong {
            capacity: plan.info_capacity,
            got: payload_bits.len(),
        });
    }
    let mut info = payload_bits.to_vec();
    info.resize(plan.info_capacity, 0);
    let mut coded = Vec::with_capacity(plan.coded_len);
    for block in info.chunks(code.k) {
        coded.extend(code.encode(block)?);
    }
    coded.extend(tail_pad(plan.tail_bits));
    Ok(coded)
}

/// Split received LLRs back into codeword chunks (the zero tail is
/// dropped) and decode each; returns concatenated info bits and whether
/// every codeword converged.
pub fn decode_stream(
    llrs: &[f64],
    code: &LdpcCode,
    n_symbols: usize,
    mcs: Mcs,
    max_iter: usize,
) -> Result<(Vec<u8>, bool)> {
    let plan = SegmentPlan::new(code, n_symbols, mcs);
    debug_assert_eq!(llrs.len(), plan.coded_len);
    let mut info = Vec::with_capacity(plan.info_capacity);
    let mut all_converged = true;
    for cw in 0..plan.n_codewords {
        let chunk = &llrs[cw * code.n..(cw + 1) * code.n];
        let (bits, conv) = crate::minsum::ldpc_decode_minsum(chunk, code, max_iter)?;
        info.extend(bits);
        all_converged &= conv;
    }
    Ok((info, all_converged))
}
