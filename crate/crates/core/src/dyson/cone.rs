//! The Householder reflection that straightens the chamber and the
//! Vandermonde harmonic function.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// `H_u(x) = x - 2⟨x, u⟩u` with `u_i = (2d - 2√d)^{-1/2}` for `i < d` and
/// `u_d = (1 - √d)/√(2d - 2√d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeTransform {
    u: Vec<f64>,
}

pub fn householder(d: usize) -> Result<ConeTransform> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("householder needs d >= 2, got {d}")));
    }
    let rd = (d as f64).sqrt();
    let norm = (2.0 * d as f64 - 2.0 * rd).sqrt();
    let mut u = vec![1.0 / norm; d];
    u[d - 1] = (1.0 - rd) / norm;
    Ok(ConeTransform { u })
}

impl ConeTransform {
    pub fn d(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.u.len() {
            return Err(Error::DimensionMismatch(x.len(), self.u.len()));
        }
        let ip: f64 = x.iter().zip(&self.u).map(|(a, b)| a * b).sum();
        Ok(x.iter().zip(&self.u).map(|(a, b)| a - 2.0 * ip * b).collect())
    }

    /// Membership in `C̃ = {x_1 > … > x_{d-1} > (√d - 1)^{-1} Σ_{i<d} x_i, x_d = 0}`,
    /// with `tol` applied to the equality and strict inequalities.
    pub fn in_image_cone(&self, x: &[f64], tol: f64) -> bool {
        let d = self.u.len();
        if x.len() != d || x[d - 1].abs() > tol {
            return false;
        }
        let head = &x[..d - 1];
        let floor = head.iter().sum::<f64>() / ((d as f64).sqrt() - 1.0);
        head.windows(2).all(|w| w[0] > w[1] - tol) && head[d - 2] > floor - tol
    }
}

/// `U(x) = ∏_{i<j}(x_i - x_j)` in exact integer arithmetic.
pub fn vandermonde_u_exact(x: &[i64]) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc *= BigInt::from(x[i] - x[j]);
        }
    }
    acc
}

pub fn vandermonde_u(x: &[f64]) -> f64 {
    let mut acc = 1.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc *= x[i] - x[j];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn ones_map_to_last_axis() {
        let h = householder(4).unwrap();
        let y = h.apply(&[1.0; 4]).unwrap();
        for (a, b) in y.iter().zip([0.0, 0.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(householder(1).is_err());
    }

    #[test]
    fn reflection_properties() {
        let mut rng = SeededRng::new(1, 0);
        for d in 2..=6 {
            let h = householder(d).unwrap();
            assert!((h.u().iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
            for _ in 0..100 {
                let x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                let y: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                let hx = h.apply(&x).unwrap();
                let back = h.apply(&hx).unwrap();
                assert!(x.iter().zip(&back).all(|(a, b)| (a - b).abs() < 1e-12));
                let hy = h.apply(&y).unwrap();
                let ip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
                assert!((ip(&x, &y) - ip(&hx, &hy)).abs() < 1e-12);
                let mean = x.iter().sum::<f64>() / d as f64;
                let z: Vec<f64> = x.iter().map(|v| v - mean).collect();
                assert!(h.apply(&z).unwrap()[d - 1].abs() < 1e-12);
                let mut sorted = z.clone();
                sorted.sort_by(|a, b| b.total_cmp(a));
                assert!(h.in_image_cone(&h.apply(&sorted).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde_u_exact(&[2, 1, 0]), BigInt::from(2));
        assert_eq!(vandermonde_u_exact(&[3, 3, -6]), BigInt::from(0));
        assert_eq!(vandermonde_u(&[2.0, 1.0, 0.0]), 2.0);
        let four = vandermonde_u_exact(&[1, -1]) * 2
            + vandermonde_u_exact(&[2, -2])
            + vandermonde_u_exact(&[0, 0]);
        assert_eq!(four, BigInt::from(8));
    }
}
