//! Families of `d` piecewise-linear functions on `[0, 1]` pinned to zero at
//! both ends: the layer curves `P_σ` of a permutation and the rescaled
//! lattice path `ŝ`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::path::LatticePath;
use crate::perm::{layer_decompose, LayerDecomposition, Permutation};

#[derive(Clone, Debug, PartialEq)]
pub struct ScaledPathFamily {
    layers: Vec<Vec<(f64, f64)>>,
}

impl ScaledPathFamily {
    /// Each layer is a breakpoint list starting at `(0, 0)`, ending at
    /// `(1, 0)`, with strictly increasing abscissae.
    pub fn new(layers: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        for (l, pts) in layers.iter().enumerate() {
            let ok_ends = pts.first() == Some(&(0.0, 0.0)) && pts.last() == Some(&(1.0, 0.0));
            if !ok_ends {
                return Err(Error::InvalidArgument(format!(
                    "layer {} must start at (0,0) and end at (1,0)",
                    l + 1
                )));
            }
            if pts.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::InvalidArgument(format!(
                    "layer {} has non-increasing abscissae",
                    l + 1
                )));
            }
        }
        Ok(Self { layers })
    }

    pub fn d(&self) -> usize {
        self.layers.len()
    }

    /// Breakpoints of layer `l` (1-based).
    pub fn layer(&self, l: usize) -> &[(f64, f64)] {
        &self.layers[l - 1]
    }

    /// Value of layer `l` (1-based) at `t ∈ [0, 1]`.
    pub fn eval(&self, l: usize, t: f64) -> f64 {
        interpolate(&self.layers[l - 1], t)
    }

    pub fn eval_all(&self, t: f64) -> Vec<f64> {
        self.layers.iter().map(|pts| interpolate(pts, t)).collect()
    }

    /// Sorted union of all breakpoint abscissae.
    pub fn breakpoint_grid(&self) -> Vec<f64> {
        merged_grid(self.layers.iter())
    }

    pub fn sup_norm(&self) -> f64 {
        self.layers
            .iter()
            .flat_map(|pts| pts.iter().map(|p| p.1.abs()))
            .fold(0.0, f64::max)
    }

    /// CSV with header `t,y_1,…,y_d`, one row per point of the merged breakpoint grid.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "t")?;
        for l in 1..=self.d() {
            write!(out, ",y_{l}")?;
        }
        writeln!(out)?;
        for t in self.breakpoint_grid() {
            write!(out, "{}", fmt_f64(t))?;
            for y in self.eval_all(t) {
                write!(out, ",{}", fmt_f64(y))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn interpolate(pts: &[(f64, f64)], t: f64) -> f64 {
    let k = pts.partition_point(|p| p.0 <= t);
    if k == 0 {
        return pts[0].1;
    }
    if k == pts.len() {
        return pts[k - 1].1;
    }
    let (x0, y0) = pts[k - 1];
    let (x1, y1) = pts[k];
    y0 + (y1 - y0) * (t - x0) / (x1 - x0)
}

fn merged_grid<'a>(layers: impl Iterator<Item = &'a Vec<(f64, f64)>>) -> Vec<f64> {
    let mut grid: Vec<f64> = layers.flat_map(|pts| pts.iter().map(|p| p.0)).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// `P_σ = (f(α^1), …, f(α^d))`: layer `l` interpolates `(0,0)`,
/// `(i/(n+1), (σ(i) - i)/√(2dn))` for `i ∈ A^l`, and `(1,0)`.
pub fn build_p_sigma(sigma: &Permutation, d: usize) -> Result<ScaledPathFamily> {
    let layers = layer_decompose(sigma, d)?;
    Ok(build_p_from_layers(sigma, &layers))
}

pub fn build_p_from_layers(sigma: &Permutation, layers: &LayerDecomposition) -> ScaledPathFamily {
    let n = sigma.len();
    let d = layers.d();
    let x_scale = 1.0 / (n as f64 + 1.0);
    let y_scale = 1.0 / (2.0 * d as f64 * n as f64).sqrt();
    let mut out = vec![vec![(0.0, 0.0)]; d];
    for (idx, &l) in layers.labels().iter().enumerate() {
        let i = idx + 1;
        let y = (sigma.at(i) as f64 - i as f64) * y_scale;
        out[l as usize - 1].push((i as f64 * x_scale, y));
    }
    for pts in &mut out {
        pts.push((1.0, 0.0));
    }
    ScaledPathFamily { layers: out }
}

/// `ŝ`: coordinate `l` interpolates `(k/n, s_l(k)/√(2n/d))`, `k = 0..=n`.
pub fn build_s_hat(path: &LatticePath) -> Result<ScaledPathFamily> {
    if !path.is_bridge() {
        return Err(Error::NotABridge);
    }
    let n = path.n();
    if n == 0 {
        return Err(Error::InvalidArgument("path has no steps".into()));
    }
    let d = path.d();
    let scale = 1.0 / (2.0 * n as f64 / d as f64).sqrt();
    let layers = (0..d)
        .map(|l| {
            path.points()
                .enumerate()
                .map(|(k, p)| {
                    let t = if k == n { 1.0 } else { k as f64 / n as f64 };
                    (t, p[l] as f64 * scale)
                })
                .collect()
        })
        .collect();
    Ok(ScaledPathFamily { layers })
}

/// `sup_t Σ_l |P_l(t) - Q_l(t)|`, evaluated exactly on the merged breakpoint grid.
pub fn sup_distance(p: &ScaledPathFamily, q: &ScaledPathFamily) -> Result<f64> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch(p.d(), q.d()));
    }
    let grid = merged_grid(p.layers.iter().chain(q.layers.iter()));
    let dist = grid
        .iter()
        .map(|&t| {
            p.layers
                .iter()
                .zip(&q.layers)
                .map(|(a, b)| (interpolate(a, t) - interpolate(b, t)).abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    Ok(dist)
}

/// `max_t max_l (P_{l+1}(t) - P_l(t))^+` over the merged breakpoint grid.
///
/// Finite-`n` layer curves may cross: for `σ = 15423` the second layer
/// starts above the first. The violation vanishes in the scaling limit.
pub fn max_order_violation(p: &ScaledPathFamily) -> f64 {
    p.breakpoint_grid()
        .into_iter()
        .flat_map(|t| {
            let v = p.eval_all(t);
            (1..v.len()).map(move |l| v[l] - v[l - 1]).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// Exact version of the ordering check: `true` iff consecutive nonempty
/// layers satisfy `f(α^l) >= f(α^{l+1})` at every breakpoint.
///
/// All layers share the scales `1/(n+1)` and `1/√(2dn)`, so the comparison is
/// made on integer abscissae `i` and ordinates `σ(i) - i` with fractions
/// compared by cross-multiplication.
pub fn layers_ordered_exact(sigma: &Permutation, d: usize) -> Result<bool> {
    let layers = layer_decompose(sigma, d)?;
    let n = sigma.len() as i128;
    let pts: Vec<Vec<(i128, i128)>> = (1..=d)
        .filter(|&l| !layers.layer(l).is_empty())
        .map(|l| {
            let mut v = vec![(0, 0)];
            v.extend(layers.sequence(l).into_iter().map(|(i, s)| (i as i128, s as i128 - i as i128)));
            v.push((n + 1, 0));
            v
        })
        .collect();
    let mut grid: Vec<i128> = pts.iter().flat_map(|v| v.iter().map(|p| p.0)).collect();
    grid.sort_unstable();
    grid.dedup();
    // value at x as num/den with den > 0
    let eval = |v: &[(i128, i128)], x: i128| -> (i128, i128) {
        let k = v.partition_point(|p| p.0 <= x);
        if k == v.len() {
            return (v[k - 1].1, 1);
        }
        let (x0, y0) = v[k - 1];
        let (x1, y1) = v[k];
        (y0 * (x1 - x) + y1 * (x - x0), x1 - x0)
    };
    for &x in &grid {
        for w in pts.windows(2) {
            let (p, q) = eval(&w[0], x);
            let (r, s) = eval(&w[1], x);
            if p * s < r * q {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
