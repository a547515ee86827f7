//! Plain (unnormalized) min-sum message passing with flooding schedule and
//! early exit once all parity checks pass.

use crate::code::LdpcCode;
use crate::{FecError, Result, LLR_CLIP};

/// Decode `llrs` (positive means bit 0). Returns the info bits and whether
/// the decoder converged to a valid codeword within `max_iter` iterations.
pub fn ldpc_decode_minsum(llrs: &[f64], code: &LdpcCode, max_iter: usize) -> Result<(Vec<u8>, bool)> {
    if llrs.len() != code.n {
        return Err(FecError::LlrLength {
            expected: code.n,
            got: llrs.len(),
        });
    }
    let checks = code.check_neighbors();
    let channel: Vec<f64> = llrs.iter().map(|l| l.clamp(-LLR_CLIP, LLR_CLIP)).collect();

    // Flat edge storage: per check, a contiguous run of edges.
    let mut edge_var = Vec::new();
    let mut check_start = Vec::with_capacity(checks.len() + 1);
    check_start.push(0usize);
    for nb in &checks {
        edge_var.extend_from_slice(nb);
        check_start.push(edge_var.len());
    }
    let n_edges = edge_var.len();
    let mut v2c = vec![0.0f64; n_edges];
    let mut c2v = vec![0.0f64; n_edges];
    for e in 0..n_edges {
        v2c[e] = channel[edge_var[e]];
    }

    let mut total = channel.clone();
    let mut hard = vec![0u8; code.n];
    let mut converged = false;
    for _ in 0..max_iter {
        // Check update: sign product and two smallest magnitudes.
        for ci in 0..checks.len() {
            let (s, e_end) = (check_start[ci], check_start[ci + 1]);
            let mut sign = 1.0f64;
            let mut min1 = f64::INFINITY;
            let mut min2 = f64::INFINITY;
            let mut argmin = s;
            for e in s..e_end {
                let m = v2c[e];
                if m < 0.0 {
                    sign = -sign;
                }
                let a = m.abs();
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    argmin = e;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for e in s..e_end {
                let mag = if e == argmin { min2 } else { min1 };
                let sgn_excl = if v2c[e] < 0.0 { -sign } else { sign };
                c2v[e] = sgn_excl * mag;
            }
        }
        // Variable update and totals.
        total.copy_from_slice(&channel);
        for e in 0..n_edges {
            total[edge_var[e]] += c2v[e];
        }
        for e in 0..n_edges {
            v2c[e] = (total[edge_var[e]] - c2v[e]).clamp(-LLR_CLIP * 4.0, LLR_CLIP * 4.0);
        }
        for v in 0..code.n {
            hard[v] = (total[v] < 0.0) as u8;
        }
        if code.parity_ok(&hard) {
            converged = true;
            break;
        }
    }
    if !converged {
        for v in 0..code.n {
            hard[v] = (total[v] < 0.0) as u8;
        }
    }
    Ok((hard[..code.k].to_vec(), converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use axphy_core::rng::SeededRng;
    use axphy_frame::CodeRate;

    fn bits_to_llrs(bits: &[u8], mag: f64) -> Vec<f64> {
        bits.iter()
            .map(|&b| if b == 0 { mag } else { -mag })
            .collect()
    }

    #[test]
    fn noiseless_converges_first_iteration() {
        let code = LdpcCode::for_rate(CodeRate::R56);
        let mut rng = SeededRng::new(50, 0);
        let info = rng.fill_bits(code.k);
        let cw = code.encode(&info).unwrap();
        let llrs = bits_to_llrs(&cw, LLR_CLIP);
        let (out, conv) = ldpc_decode_minsum(&llrs, &code, 1).unwrap();
        assert!(conv);
        assert_eq!(out, info);
    }

    #[test]
    fn valid_codeword_is_returned_unchanged() {
        let code = LdpcCode::for_rate(CodeRate::R34);
        let mut rng = SeededRng::new(51, 0);
        let info = rng.fill_bits(code.k);
        let cw = code.encode(&info).unwrap();
        let llrs = bits_to_llrs(&cw, 7.3);
        let (out, conv) = ldpc_decode_minsum(&llrs, &code, 20).unwrap();
        assert!(conv);
        assert_eq!(out, info);
    }

    #[test]
    fn corrects_single_flips() {
        let code = LdpcCode::for_rate(CodeRate::R56);
        let mut rng = SeededRng::new(52, 0);
        for trial in 0..100 {
            let info = rng.fill_bits(code.k);
            let cw = code.encode(&info).unwrap();
            let mut llrs = bits_to_llrs(&cw, LLR_CLIP);
            let flip = (rng.next_u64() % code.n as u64) as usize;
            llrs[flip] = -llrs[flip];
            let (out, conv) = ldpc_decode_minsum(&llrs, &code, 20).unwrap();
            assert!(conv, "trial {trial} did not converge");
            assert_eq!(out, info, "trial {trial} miscorrected");
        }
    }

    #[test]
    fn awgn_monte_carlo_improves_on_raw_bits() {
        // Rate 5/6 BPSK over AWGN at Eb/N0 = 5 dB: post-FEC BER must be
        // below pre-FEC BER over 500 codewords.
        let code = LdpcCode::for_rate(CodeRate::R56);
        let rate = code.k as f64 / code.n as f64;
        let ebn0 = 10f64.powf(5.0 / 10.0);
        let sigma2 = 1.0 / (2.0 * rate * ebn0);
        let mut rng = SeededRng::new(53, 0);
        let mut pre_errs = 0usize;
        let mut post_errs = 0usize;
        let mut bits = 0usize;
        for _ in 0..500 {
            let info = rng.fill_bits(code.k);
            let cw = code.encode(&info).unwrap();
            let llrs: Vec<f64> = cw
                .iter()
                .map(|&b| {
                    let tx = if b == 0 { 1.0 } else { -1.0 };
                    let y = tx + sigma2.sqrt() * rng.gaussian();
                    2.0 * y / sigma2
                })
                .collect();
            pre_errs += llrs
                .iter()
                .zip(&cw)
                .filter(|(l, &b)| ((**l < 0.0) as u8) != b)
                .count();
            let (out, _) = ldpc_decode_minsum(&llrs, &code, 20).unwrap();
            post_errs += out.iter().zip(&info).filter(|(a, b)| a != b).count();
            bits += code.n;
        }
        let pre = pre_errs as f64 / bits as f64;
        let post = post_errs as f64 / (500 * code.k) as f64;
        assert!(post < pre, "post {post} !< pre {pre}");
    }
}
