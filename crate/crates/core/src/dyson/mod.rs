//! The traceless Hermitian Brownian bridge and its ranked eigenvalue process.
//!
//! Diagonal entries are standard Brownian bridges projected to zero sum.
//! Each entry above the diagonal is `(B + iB')/√2` for independent standard
//! bridges `B`, `B'`, and the entries below are conjugates.

mod cone;
mod density;
mod eig;

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::fmt_f64;

pub use cone::{householder, vandermonde_u, vandermonde_u_exact, ConeTransform};
pub use density::{bridge_marginal_density, normalisation, quadrature_normalisation};
pub use eig::{
    d2_closed_form, d2_matrix, eig_hermitian, eig_hermitian_vectors, traceless_project,
    HermitianMatrix, JACOBI_TOLERANCE, MAX_SWEEPS,
};

pub const DEFAULT_GRID: usize = 1024;

/// A standard Brownian bridge on the grid `k/G`, `k = 0..=G`, built as `W(t) - tW(1)`.
pub fn standard_bridge<R: Rng + ?Sized>(grid: usize, rng: &mut R) -> Vec<f64> {
    let dt = 1.0 / grid as f64;
    let sd = dt.sqrt();
    let mut w = Vec::with_capacity(grid + 1);
    w.push(0.0);
    let mut acc = 0.0;
    for _ in 0..grid {
        let z: f64 = StandardNormal.sample(rng);
        acc += sd * z;
        w.push(acc);
    }
    let end = acc;
    for (k, x) in w.iter_mut().enumerate() {
        *x -= k as f64 * dt * end;
    }
    w[grid] = 0.0;
    w
}

/// Norm of a three-dimensional standard Brownian bridge, which has the law
/// of a Brownian excursion.
pub fn bessel3_bridge<R: Rng + ?Sized>(grid: usize, rng: &mut R) -> Vec<f64> {
    let b: Vec<Vec<f64>> = (0..3).map(|_| standard_bridge(grid, rng)).collect();
    (0..=grid)
        .map(|k| (b[0][k] * b[0][k] + b[1][k] * b[1][k] + b[2][k] * b[2][k]).sqrt())
        .collect()
}

#[derive(Clone, Debug)]
pub struct HermitianBridgePath {
    d: usize,
    times: Vec<f64>,
    mats: Vec<HermitianMatrix>,
}

#[derive(Serialize)]
struct MatrixRecord {
    t: f64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl HermitianBridgePath {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.mats
    }

    /// Structural checks: Hermitian to `1e-12`, `|Tr| <= 1e-10`, zero endpoints.
    pub fn check(&self) -> Result<()> {
        for (t, m) in self.times.iter().zip(&self.mats) {
            let defect = m.hermitian_defect();
            if defect > 1e-12 {
                return Err(Error::NotHermitian(defect));
            }
            if m.trace().norm() > 1e-10 {
                return Err(Error::InvalidArgument(format!("trace {} at t = {t}", m.trace())));
            }
        }
        let pinned = |m: &HermitianMatrix| m.frobenius() == 0.0;
        if !pinned(&self.mats[0]) || !pinned(self.mats.last().expect("grid is nonempty")) {
            return Err(Error::InvalidArgument("bridge is not pinned at 0 and 1".into()));
        }
        Ok(())
    }

    /// JSON array of `{t, re, im}` records.
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let records: Vec<MatrixRecord> = self
            .times
            .iter()
            .zip(&self.mats)
            .map(|(&t, m)| {
                let rows = m.rows();
                MatrixRecord {
                    t,
                    re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
                    im: rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect(),
                }
            })
            .collect();
        serde_json::to_writer(out, &records)?;
        Ok(())
    }
}

pub fn sample_hermitian_bridge<R: Rng + ?Sized>(
    d: usize,
    grid: usize,
    rng: &mut R,
) -> Result<HermitianBridgePath> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid size {grid} must be at least 2")));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let diag: Vec<Vec<f64>> = (0..d).map(|_| standard_bridge(grid, rng)).collect();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut off = Vec::with_capacity(d * (d - 1) / 2);
    for _ in 0..d * (d - 1) / 2 {
        off.push((standard_bridge(grid, rng), standard_bridge(grid, rng)));
    }
    let mut mats = Vec::with_capacity(grid + 1);
    for k in 0..=grid {
        let mean = diag.iter().map(|b| b[k]).sum::<f64>() / d as f64;
        let mut m = HermitianMatrix::zeros(d);
        let mut idx = 0;
        for i in 0..d {
            m.set(i, i, Complex64::new(diag[i][k] - mean, 0.0));
            for j in i + 1..d {
                let (re, im) = &off[idx];
                idx += 1;
                let z = Complex64::new(re[k] * r, im[k] * r);
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        mats.push(m);
    }
    // pin the endpoints exactly; the projection can leave signed zeros only
    mats[0] = HermitianMatrix::zeros(d);
    mats[grid] = HermitianMatrix::zeros(d);
    let times = (0..=grid).map(|k| k as f64 / grid as f64).collect();
    Ok(HermitianBridgePath { d, times, mats })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPath {
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl EigenPath {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `Λ(t_k)` in non-increasing order.
    pub fn at(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with header `t,lambda_1,…,lambda_d`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let d = self.values.first().map_or(0, Vec::len);
        write!(out, "t")?;
        for l in 1..=d {
            write!(out, ",lambda_{l}")?;
        }
        writeln!(out)?;
        for (t, v) in self.times.iter().zip(&self.values) {
            write!(out, "{}", fmt_f64(*t))?;
            for x in v {
                write!(out, ",{}", fmt_f64(*x))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

pub fn eigenvalue_process(path: &HermitianBridgePath) -> Result<EigenPath> {
    let values = path.mats.iter().map(eig_hermitian).collect::<Result<Vec<_>>>()?;
    Ok(EigenPath { times: path.times.clone(), values })
}

/// `Λ(Z(t_k))` at the grid index nearest to `t`.
pub fn eigenvalues_at(path: &HermitianBridgePath, t: f64) -> Result<Vec<f64>> {
    let grid = path.times.len() - 1;
    let k = (t * grid as f64).round() as usize;
    eig_hermitian(&path.mats[k.min(grid)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn bridges_are_pinned() {
        let mut rng = SeededRng::new(1, 0);
        let b = standard_bridge(16, &mut rng);
        assert_eq!(b.len(), 17);
        assert_eq!(b[0], 0.0);
        assert_eq!(b[16], 0.0);
    }

    #[test]
    fn hermitian_bridge_structure() {
        let mut rng = SeededRng::new(2, 0);
        for d in 1..=5 {
            let z = sample_hermitian_bridge(d, 64, &mut rng).unwrap();
            z.check().unwrap();
            let ev = eigenvalue_process(&z).unwrap();
            for k in 0..ev.len() {
                let v = ev.at(k);
                assert!(v.windows(2).all(|w| w[0] >= w[1]));
                assert!(v.iter().sum::<f64>().abs() < 1e-10);
            }
            assert!(ev.at(0).iter().all(|&x| x == 0.0));
            assert!(ev.at(64).iter().all(|&x| x == 0.0));
        }
        assert!(sample_hermitian_bridge(2, 1, &mut rng).is_err());
    }

    #[test]
    fn d2_eigenvalues_match_closed_form() {
        let mut rng = SeededRng::new(3, 0);
        let z = sample_hermitian_bridge(2, 128, &mut rng).unwrap();
        let ev = eigenvalue_process(&z).unwrap();
        for (k, m) in z.matrices().iter().enumerate() {
            let b1 = m.get(0, 0).re * std::f64::consts::SQRT_2;
            let b2 = m.get(0, 1).re * std::f64::consts::SQRT_2;
            let b3 = m.get(0, 1).im * std::f64::consts::SQRT_2;
            let (l1, l2) = d2_closed_form(b1, b2, b3);
            assert!((ev.at(k)[0] - l1).abs() < 1e-10 && (ev.at(k)[1] - l2).abs() < 1e-10);
        }
    }

    #[test]
    fn entry_variances() {
        let mut rng = SeededRng::new(4, 0);
        let (d, reps, grid) = (3, 20_000, 8);
        let k = grid / 2;
        let (mut s_re, mut s_diag) = (0.0, 0.0);
        for _ in 0..reps {
            let z = sample_hermitian_bridge(d, grid, &mut rng).unwrap();
            let m = &z.matrices()[k];
            s_re += m.get(0, 1).re.powi(2);
            s_diag += m.get(0, 0).re.powi(2);
        }
        let tt = 0.25;
        let v_re = s_re / reps as f64;
        let v_diag = s_diag / reps as f64;
        // sampling sd of a variance estimate is about var·√(2/reps)
        let want_re = tt / 2.0;
        let want_diag = tt * (1.0 - 1.0 / d as f64);
        assert!((v_re - want_re).abs() < 4.0 * want_re * (2.0 / reps as f64).sqrt());
        assert!((v_diag - want_diag).abs() < 4.0 * want_diag * (2.0 / reps as f64).sqrt());
    }

    #[test]
    fn exports() {
        let mut rng = SeededRng::new(5, 0);
        let z = sample_hermitian_bridge(2, 4, &mut rng).unwrap();
        let mut buf = Vec::new();
        z.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 5);
        assert_eq!(v[2]["re"][0][1], v[2]["re"][1][0]);
        let mut csv = Vec::new();
        eigenvalue_process(&z).unwrap().write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("t,lambda_1,lambda_2\n"));
        assert_eq!(text.lines().count(), 6);
    }
}
