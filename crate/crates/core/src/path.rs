//! Lattice paths `s_ω` in the zero-sum sublattice of `Z^d` and distances to
//! the Weyl chamber `{x_1 >= … >= x_d}`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::words::LayeredWords;

/// `s(0) = 0, s(1), …, s(n)` stored row-major with stride `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath {
    d: usize,
    coords: Vec<i64>,
}

impl LatticePath {
    /// Builds a path from its points, checking the step set and the zero-sum constraint.
    pub fn from_points(d: usize, points: &[Vec<i64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * d);
        for (t, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::DimensionMismatch(p.len(), d));
            }
            let sum: i64 = p.iter().sum();
            if sum != 0 {
                return Err(Error::NonZeroSum(sum));
            }
            if t > 0 {
                let prev = &points[t - 1];
                let delta: Vec<i64> = p.iter().zip(prev).map(|(x, y)| x - y).collect();
                let plus = delta.iter().filter(|&&v| v == 1).count();
                let minus = delta.iter().filter(|&&v| v == -1).count();
                let zero = delta.iter().filter(|&&v| v == 0).count();
                let ok = (plus == 1 && minus == 1 && zero == d - 2) || zero == d;
                if !ok {
                    return Err(Error::InvalidArgument(format!(
                        "step {delta:?} at time {t} is not of the form e_i - e_j"
                    )));
                }
            }
            coords.extend_from_slice(p);
        }
        if coords.is_empty() {
            return Err(Error::InvalidArgument("a path needs at least one point".into()));
        }
        Ok(Self { d, coords })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of steps.
    pub fn n(&self) -> usize {
        self.coords.len() / self.d - 1
    }

    pub fn point(&self, m: usize) -> &[i64] {
        &self.coords[m * self.d..(m + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[i64]> {
        self.coords.chunks_exact(self.d)
    }

    pub fn is_bridge(&self) -> bool {
        self.point(self.n()).iter().all(|&v| v == 0)
    }

    /// `s*(m) = s(n - m)`.
    pub fn reversed(&self) -> Self {
        let coords = self.coords.chunks_exact(self.d).rev().flatten().copied().collect();
        Self { d: self.d, coords }
    }

    /// Largest absolute coordinate over the whole path.
    pub fn max_abs(&self) -> i64 {
        self.coords.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// CSV with header `t,x_1,…,x_d`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "t")?;
        for l in 1..=self.d {
            write!(out, ",x_{l}")?;
        }
        writeln!(out)?;
        for (t, p) in self.points().enumerate() {
            write!(out, "{t}")?;
            for v in p {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// `s_ω(m) = Σ_{j <= m} e_{a(j)} - e_{b(j)}`; coordinate `l` is `diff^l(m)`.
pub fn path_from_words(omega: &LayeredWords) -> LatticePath {
    let d = omega.d();
    let n = omega.n();
    let mut coords = vec![0i64; (n + 1) * d];
    for m in 1..=n {
        let (prev, cur) = coords.split_at_mut(m * d);
        cur[..d].copy_from_slice(&prev[(m - 1) * d..]);
        cur[omega.a()[m - 1] as usize - 1] += 1;
        cur[omega.b()[m - 1] as usize - 1] -= 1;
    }
    LatticePath { d, coords }
}

fn check_zero_sum(x: &[i64]) -> Result<()> {
    let sum: i64 = x.iter().sum();
    if sum != 0 {
        return Err(Error::NonZeroSum(sum));
    }
    Ok(())
}

/// `x ∈ Weyl_k`, i.e. `x_i >= x_{i+1} + k` for every consecutive pair.
/// Negative `k` gives the relaxed cone.
pub fn in_weyl_k(x: &[i64], k: f64) -> Result<bool> {
    check_zero_sum(x)?;
    Ok(gaps_at_least(x, k))
}

pub(crate) fn gaps_at_least(x: &[i64], k: f64) -> bool {
    x.windows(2).all(|w| (w[0] - w[1]) as f64 >= k)
}

pub fn in_weyl(x: &[i64]) -> Result<bool> {
    in_weyl_k(x, 0.0)
}

/// L¹ distance from `x` to the nearest integer point of the Weyl chamber.
///
/// This is an L¹ antitonic regression. Pool-adjacent-violators with block
/// medians solves it exactly, and with integer data a lower median is an
/// integer, so the optimum is attained on the lattice.
pub fn weyl_distance(x: &[i64]) -> Result<i64> {
    check_zero_sum(x)?;
    Ok(antitonic_l1(x))
}

pub(crate) fn antitonic_l1(x: &[i64]) -> i64 {
    // Each block keeps its sorted members; the block value is the lower median.
    let mut blocks: Vec<Vec<i64>> = Vec::with_capacity(x.len());
    let median = |b: &Vec<i64>| b[(b.len() - 1) / 2];
    for &v in x {
        blocks.push(vec![v]);
        while blocks.len() >= 2 {
            let last = blocks.len() - 1;
            if median(&blocks[last - 1]) >= median(&blocks[last]) {
                break;
            }
            let top = blocks.pop().unwrap();
            let prev = blocks.last_mut().unwrap();
            prev.extend(top);
            prev.sort_unstable();
        }
    }
    blocks
        .iter()
        .map(|b| {
            let m = median(b);
            b.iter().map(|v| (v - m).abs()).sum::<i64>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(a: &[u8], b: &[u8], d: usize) -> LayeredWords {
        LayeredWords::new(a.to_vec(), b.to_vec(), d).unwrap()
    }

    #[test]
    fn path_of_231() {
        let s = path_from_words(&words(&[1, 1, 2], &[2, 1, 1], 2));
        assert_eq!(s.point(0), &[0, 0]);
        assert_eq!(s.point(1), &[1, -1]);
        assert_eq!(s.point(2), &[1, -1]);
        assert_eq!(s.point(3), &[0, 0]);
        assert!(s.is_bridge());
    }

    #[test]
    fn equal_words_give_zero_path() {
        let s = path_from_words(&words(&[3, 1, 2, 2], &[3, 1, 2, 2], 3));
        assert!(s.points().all(|p| p.iter().all(|&v| v == 0)));
    }

    #[test]
    fn weyl_examples() {
        assert!(in_weyl_k(&[2, 1, -3], 1.0).unwrap());
        assert!(!in_weyl_k(&[2, 1, -3], 2.0).unwrap());
        assert!(in_weyl_k(&[-1, 1], -2.0).unwrap());
        assert_eq!(weyl_distance(&[0, 0]).unwrap(), 0);
        assert_eq!(weyl_distance(&[-1, 1]).unwrap(), 2);
        assert!(matches!(weyl_distance(&[1, 1]), Err(Error::NonZeroSum(2))));
    }

    #[test]
    fn from_points_validates() {
        assert!(LatticePath::from_points(2, &[vec![0, 0], vec![1, -1]]).is_ok());
        assert!(LatticePath::from_points(2, &[vec![0, 0], vec![2, -2]]).is_err());
        assert!(LatticePath::from_points(2, &[vec![1, 0]]).is_err());
    }

    /// Brute-force L¹ distance to the chamber over a box that must contain a minimiser.
    fn brute_distance(x: &[i64]) -> i64 {
        let lo = *x.iter().min().unwrap();
        let hi = *x.iter().max().unwrap();
        let d = x.len();
        let mut best = i64::MAX;
        let mut y = vec![lo; d];
        loop {
            if y.windows(2).all(|w| w[0] >= w[1]) {
                let cost: i64 = y.iter().zip(x).map(|(a, b)| (a - b).abs()).sum();
                best = best.min(cost);
            }
            let mut k = 0;
            loop {
                if k == d {
                    return best;
                }
                if y[k] < hi {
                    y[k] += 1;
                    break;
                }
                y[k] = lo;
                k += 1;
            }
        }
    }

    proptest! {
        #[test]
        fn distance_matches_brute_force(mut x in prop::collection::vec(-4i64..=4, 2..=5)) {
            let s: i64 = x.iter().sum();
            x.push(-s);
            let fast = weyl_distance(&x).unwrap();
            prop_assert_eq!(fast, brute_distance(&x));
            prop_assert_eq!(fast == 0, in_weyl(&x).unwrap());
        }

        #[test]
        fn paths_are_zero_sum(a in prop::collection::vec(1u8..=4, 0..40), seed in any::<u64>()) {
            let b: Vec<u8> = a.iter().enumerate()
                .map(|(i, _)| ((seed >> (i % 60)) as u8 % 4) + 1).collect();
            let s = path_from_words(&LayeredWords::new(a, b, 4).unwrap());
            for p in s.points() {
                prop_assert_eq!(p.iter().sum::<i64>(), 0);
            }
        }

        #[test]
        fn reversal_identity(a in prop::collection::vec(1u8..=3, 1..30), b_seed in prop::collection::vec(1u8..=3, 30)) {
            let n = a.len();
            let w = LayeredWords::new(a, b_seed[..n].to_vec(), 3).unwrap();
            let s = path_from_words(&w);
            let r = path_from_words(&w.reversed());
            for m in 0..=n {
                let expect: Vec<i64> = s.point(n).iter().zip(s.point(n - m)).map(|(x, y)| x - y).collect();
                prop_assert_eq!(r.point(m), &expect[..]);
            }
            // swapping the reversed words traces s* for a bridge shifted by s(n)
            let rs = path_from_words(&w.reversed().swapped());
            for m in 0..=n {
                let expect: Vec<i64> = s.point(n - m).iter().zip(s.point(n)).map(|(x, y)| x - y).collect();
                prop_assert_eq!(rs.point(m), &expect[..]);
            }
        }
    }
}
