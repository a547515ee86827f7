//! Iterative radix-2 FFT. Forward transform is unnormalized, the inverse
//! carries the 1/N factor, so `ifft(fft(x)) == x`.

use crate::{Cx, DspError, Result};

/// Unnormalized forward DFT of `x`; `size` must equal `x.len()` and be a
/// power of two.
pub fn fft(x: &[Cx], size: usize) -> Result<Vec<Cx>> {
    if x.len() != size {
        return Err(DspError::SizeMismatch {
            expected: size,
            got: x.len(),
        });
    }
    if size == 0 || !size.is_power_of_two() {
        return Err(DspError::NotPowerOfTwo(size));
    }
    let mut data = bit_reverse_copy(x);
    let mut len = 2;
    while len <= size {
        let half = len / 2;
        let step = -2.0 * std::f64::consts::PI / len as f64;
        for start in (0..size).step_by(len) {
            for k in 0..half {
                let w = Cx::from_polar(1.0, step * k as f64);
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len *= 2;
    }
    Ok(data)
}

/// Inverse DFT with 1/N normalization.
pub fn ifft(x: &[Cx], size: usize) -> Result<Vec<Cx>> {
    let conj: Vec<Cx> = x.iter().map(|v| v.conj()).collect();
    let mut y = fft(&conj, size)?;
    let scale = 1.0 / size as f64;
    for v in &mut y {
        *v = v.conj() * scale;
    }
    Ok(y)
}

fn bit_reverse_copy(x: &[Cx]) -> Vec<Cx> {
    let n = x.len();
    let bits = n.trailing_zeros();
    let mut out = vec![Cx::new(0.0, 0.0); n];
    for (i, v) in x.iter().enumerate() {
        let j = (i.reverse_bits() >> (usize::BITS - bits)) as usize;
        out[j] = *v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn close(a: &[Cx], b: &[Cx], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    /// Direct O(N^2) DFT used as an independent oracle.
    fn naive_dft(x: &[Cx]) -> Vec<Cx> {
        let n = x.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|t| {
                        let ang = -2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64;
                        x[t] * Cx::from_polar(1.0, ang)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn impulse_is_all_ones() {
        let x = [Cx::new(1.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0), Cx::new(0.0, 0.0)];
        let y = fft(&x, 4).unwrap();
        assert!(close(&y, &vec![Cx::new(1.0, 0.0); 4], 1e-15));
    }

    #[test]
    fn constant_concentrates_at_dc() {
        let x = [Cx::new(1.0, 0.0); 4];
        let y = fft(&x, 4).unwrap();
        let expect = [
            Cx::new(4.0, 0.0),
            Cx::new(0.0, 0.0),
            Cx::new(0.0, 0.0),
            Cx::new(0.0, 0.0),
        ];
        assert!(close(&y, &expect, 1e-12));
    }

    #[test]
    fn matches_naive_dft_oracle() {
        let mut rng = SeededRng::new(7, 0);
        let x: Vec<Cx> = (0..256).map(|_| rng.complex_gaussian(1.0)).collect();
        let fast = fft(&x, 256).unwrap();
        let slow = naive_dft(&x);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10, "fft deviates from direct summation");
        }
    }

    #[test]
    fn ifft_round_trip() {
        let mut rng = SeededRng::new(21, 3);
        for n in [4usize, 64, 256, 1024] {
            let x: Vec<Cx> = (0..n).map(|_| rng.complex_gaussian(1.0)).collect();
            let y = ifft(&fft(&x, n).unwrap(), n).unwrap();
            for (a, b) in x.iter().zip(&y) {
                assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn parseval_holds() {
        let mut rng = SeededRng::new(5, 9);
        for n in [64usize, 256] {
            let x: Vec<Cx> = (0..n).map(|_| rng.complex_gaussian(1.0)).collect();
            let y = fft(&x, n).unwrap();
            let ex: f64 = x.iter().map(|v| v.norm_sqr()).sum();
            let ey: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
            assert!((ex - ey).abs() <= 1e-10 * ex);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        let x = [Cx::new(1.0, 0.0); 6];
        assert_eq!(
            fft(&x, 4),
            Err(DspError::SizeMismatch { expected: 4, got: 6 })
        );
        assert_eq!(fft(&x, 6), Err(DspError::NotPowerOfTwo(6)));
    }
}
