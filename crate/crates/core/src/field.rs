//! Field normalization: rescale a complex vector so its squared Euclidean
//! norm equals its dimension.

use crate::{Cx, DspError, Result};

pub fn normalize_field(x: &[Cx]) -> Result<Vec<Cx>> {
    if x.is_empty() {
        return Err(DspError::DegenerateInput("empty field"));
    }
    let norm_sq: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    if norm_sq <= 0.0 {
        return Err(DspError::DegenerateInput("all-zero field"));
    }
    let scale = (x.len() as f64 / norm_sq).sqrt();
    Ok(x.iter().map(|v| v * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn unit_scalar_fixed_point() {
        let y = normalize_field(&[Cx::new(1.0, 0.0)]).unwrap();
        assert!((y[0] - Cx::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn norm_two_length_four_unchanged() {
        let x = [
            Cx::new(2.0, 0.0),
            Cx::new(0.0, 0.0),
            Cx::new(0.0, 0.0),
            Cx::new(0.0, 0.0),
        ];
        let y = normalize_field(&x).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn two_tone_case() {
        // ||x|| = 2, so every entry scales by sqrt(2)/2.
        let x = [Cx::new(1.0, 1.0), Cx::new(1.0, -1.0)];
        let y = normalize_field(&x).unwrap();
        let s = (2.0f64).sqrt() / 2.0;
        assert!((y[0] - Cx::new(s, s)).norm() < 1e-15);
        let nsq: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        assert!((nsq - 2.0).abs() < 1e-12);
    }

    #[test]
    fn output_norm_and_idempotence() {
        let mut rng = SeededRng::new(2, 2);
        let x: Vec<Cx> = (0..97).map(|_| rng.complex_gaussian(3.7)).collect();
        let y = normalize_field(&x).unwrap();
        let nsq: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        assert!((nsq - 97.0).abs() < 1e-9);
        let z = normalize_field(&y).unwrap();
        for (a, b) in y.iter().zip(&z) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_field_rejected() {
        let r = normalize_field(&[Cx::new(0.0, 0.0); 4]);
        assert!(r.is_err());
    }
}
