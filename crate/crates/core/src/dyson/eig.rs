//! Small dense Hermitian matrices and a cyclic complex Jacobi eigensolver.

use num_complex::Complex64;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm below which the Jacobi sweep stops, relative to `max(1, ‖M‖_F)`.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;
/// Largest entrywise deviation from `M = M^H` accepted, relative to `max(1, ‖M‖_F)`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    d: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(d: usize) -> Self {
        Self { d, data: vec![Complex64::new(0.0, 0.0); d * d] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Row-major entries; Hermitian symmetry is checked by the eigensolver, not here.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(r.len(), d));
        }
        Ok(Self { d, data: rows.concat() })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.d + j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_{ij} |M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.d {
            for j in i..self.d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { d: self.d, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.d).map(<[Complex64]>::to_vec).collect()
    }
}

/// `H - (Tr H / d) I`.
pub fn traceless_project(h: &HermitianMatrix) -> HermitianMatrix {
    let shift = h.trace().re / h.d as f64;
    let mut out = h.clone();
    for i in 0..h.d {
        out.set(i, i, h.get(i, i) - shift);
    }
    out
}

/// Eigenvalues in non-increasing order.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian_vectors(m)?.0)
}

/// Eigenvalues in non-increasing order and the matching unit eigenvectors as columns of `V`.
pub fn eig_hermitian_vectors(m: &HermitianMatrix) -> Result<(Vec<f64>, HermitianMatrix)> {
    let d = m.d;
    let scale = m.frobenius().max(1.0);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOLERANCE * scale {
        return Err(Error::NotHermitian(defect));
    }
    let mut a = m.clone();
    let mut v = HermitianMatrix::identity(d);
    let off = |a: &HermitianMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) >= JACOBI_TOLERANCE * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off: off(&a) });
        }
        sweeps += 1;
        for p in 0..d {
            for q in p + 1..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = HermitianMatrix::zeros(d);
    for (c, &i) in order.iter().enumerate() {
        for r in 0..d {
            vectors.set(r, c, v.get(r, i));
        }
    }
    Ok((values, vectors))
}

/// One two-sided rotation `A ← U^H A U` zeroing `A_pq`, with `U = D J`: the
/// phase `D = diag(1, e^{-iφ})` makes the pivot real and `J` is the real
/// symmetric Jacobi rotation.
fn rotate(a: &mut HermitianMatrix, v: &mut HermitianMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = Complex64::from_polar(1.0, -apq.arg());
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase * -s;
    let u_qq = phase * c;
    let d = a.d;
    for k in 0..d {
        let (akp, akq) = (a.get(k, p), a.get(k, q));
        a.set(k, p, akp * u_pp + akq * u_qp);
        a.set(k, q, akp * u_pq + akq * u_qq);
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        v.set(k, p, vkp * u_pp + vkq * u_qp);
        v.set(k, q, vkp * u_pq + vkq * u_qq);
    }
    for k in 0..d {
        let (apk, aqk) = (a.get(p, k), a.get(q, k));
        a.set(p, k, u_pp.conj() * apk + u_qp.conj() * aqk);
        a.set(q, k, u_pq.conj() * apk + u_qq.conj() * aqk);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
}

/// The `d = 2` matrix `(1/√2)[[B1, B2 + iB3], [B2 - iB3, -B1]]`.
pub fn d2_matrix(b1: f64, b2: f64, b3: f64) -> HermitianMatrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    HermitianMatrix {
        d: 2,
        data: vec![
            Complex64::new(b1 * r, 0.0),
            Complex64::new(b2 * r, b3 * r),
            Complex64::new(b2 * r, -b3 * r),
            Complex64::new(-b1 * r, 0.0),
        ],
    }
}

/// Eigenvalues `±√(B1² + B2² + B3²)/√2` of [`d2_matrix`].
pub fn d2_closed_form(b1: f64, b2: f64, b3: f64) -> (f64, f64) {
    let r = (b1 * b1 + b2 * b2 + b3 * b3).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
    (r, -r)
}
