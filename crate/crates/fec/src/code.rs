//! Quasi-cyclic LDPC code built from a base matrix of circulant shifts,
//! shipped as versioned plain-text files. Encoding is systematic through
//! the standard dual-diagonal back-substitution.

use crate::{FecError, Result};
use axphy_frame::CodeRate;

pub const CODEWORD_BITS: usize = 1944;
pub const LIFTING: usize = 81;
const BASE_COLS: usize = 24;

const R34_TABLE: &str = include_str!("../matrices/qc_1944_r34.txt");
const R56_TABLE: &str = include_str!("../matrices/qc_1944_r56.txt");

/// One LDPC code instance: parsed base matrix plus derived dimensions.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    pub rate: CodeRate,
    pub z: usize,
    pub n: usize,
    pub k: usize,
    /// base[r][c] = Some(shift) for a circulant block, None for zero.
    pub base: Vec<Vec<Option<usize>>>,
}

impl LdpcCode {
    pub fn for_rate(rate: CodeRate) -> Self {
        let text = match rate {
            CodeRate::R34 => R34_TABLE,
            CodeRate::R56 => R56_TABLE,
        };
        Self::parse(text, rate).expect("bundled prototype matrices are valid")
    }

    pub fn parse(text: &str, rate: CodeRate) -> Result<Self> {
        let mut base = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<Option<usize>> = line
                .split_whitespace()
                .map(|tok| {
                    if tok == "-" {
                        Ok(None)
                    } else {
                        tok.parse::<usize>()
                            .map(Some)
                            .map_err(|e| FecError::BadMatrix(format!("token {tok}: {e}")))
                    }
                })
                .collect::<Result<_>>()?;
            if row.len() != BASE_COLS {
                return Err(FecError::BadMatrix(format!(
                    "row has {} columns, expected {BASE_COLS}",
                    row.len()
                )));
            }
            base.push(row);
        }
        let rows = base.len();
        let n = BASE_COLS * LIFTING;
        let k = n - rows * LIFTING;
        Ok(Self {
            rate,
            z: LIFTING,
            n,
            k,
            base,
        })
    }

    fn base_rows(&self) -> usize {
        self.base.len()
    }

    fn info_blocks(&self) -> usize {
        BASE_COLS - self.base_rows()
    }

    /// XOR-accumulate the cyclic shift of `src` by `s` into `dst`.
    fn xor_rotated(dst: &mut [u8], src: &[u8], s: usize) {
        let z = src.len();
        for i in 0..z {
            dst[i] ^= src[(i + s) % z];
        }
    }

    /// Systematic encoding. `info` holds `k` bits (0/1 bytes).
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k {
            return Err(FecError::InfoLength {
                expected: self.k,
                got: info.len(),
            });
        }
        let z = self.z;
        let rows = self.base_rows();
        let kb = self.info_blocks();
        // Per-row info syndromes lambda_r.
        let mut lambda = vec![vec![0u8; z]; rows];
        for (r, row) in self.base.iter().enumerate() {
            for (c, entry) in row.iter().take(kb).enumerate() {
                if let Some(s) = entry {
                    Self::xor_rotated(&mut lambda[r], &info[c * z..(c + 1) * z], *s);
                }
            }
        }
        // The first parity column sums to a plain identity across rows, so
        // p0 is the sum of all syndromes.
        let mut p0 = vec![0u8; z];
        for l in &lambda {
            for i in 0..z {
                p0[i] ^= l[i];
            }
        }
        // Back-substitute the bidiagonal tail.
        let mut parity = vec![p0];
        for r in 0..rows - 1 {
            let mut p = lambda[r].clone();
            if r > 0 {
                let prev = parity[r].clone();
                for i in 0..z {
                    p[i] ^= prev[i];
                }
            }
            if let Some(s) = self.base[r][kb] {
                Self::xor_rotated(&mut p, &parity[0].clone(), s);
            }
            parity.push(p);
        }
        let mut cw = Vec::with_capacity(self.n);
        cw.extend_from_slice(info);
        for p in &parity {
            cw.extend_from_slice(p);
        }
        debug_assert!(self.parity_ok(&cw));
        Ok(cw)
    }

    /// H * c over GF(2) == 0.
    pub fn parity_ok(&self, codeword: &[u8]) -> bool {
        if codeword.len() != self.n {
            return false;
        }
        let z = self.z;
        for row in &self.base {
            let mut acc = vec![0u8; z];
            for (c, entry) in row.iter().enumerate() {
                if let Some(s) = entry {
                    Self::xor_rotated(&mut acc, &codeword[c * z..(c + 1) * z], *s);
                }
            }
            if acc.iter().any(|&b| b != 0) {
                return false;
            }
        }
        true
    }

    /// Adjacency of the lifted graph: for each check, its variable indices.
    pub fn check_neighbors(&self) -> Vec<Vec<usize>> {
        let z = self.z;
        let mut checks = vec![Vec::new(); self.base_rows() * z];
        for (r, row) in self.base.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                if let Some(s) = entry {
                    for j in 0..z {
                        checks[r * z + j].push(c * z + (j + s) % z);
                    }
                }
            }
        }
        checks
    }
}
