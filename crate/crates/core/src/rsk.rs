//! Row-insertion Robinson–Schensted and its inverse.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A standard Young tableau stored row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    /// Validates that the rows form a partition shape and that the filling
    /// uses `1..=n` once each, increasing along rows and down columns.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = rows.iter().map(Vec::len).sum();
        if rows.iter().any(Vec::is_empty) {
            return Err(Error::InvalidTableau("empty row".into()));
        }
        if rows.windows(2).any(|w| w[0].len() < w[1].len()) {
            return Err(Error::InvalidTableau("row lengths must be weakly decreasing".into()));
        }
        let mut seen = vec![false; n + 1];
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidTableau(format!("entry {v} is out of range or repeated")));
                }
                if c > 0 && row[c - 1] >= v {
                    return Err(Error::InvalidTableau(format!("row {} not increasing at column {}", r + 1, c + 1)));
                }
                if r > 0 && rows[r - 1][c] >= v {
                    return Err(Error::InvalidTableau(format!("column {} not increasing at row {}", c + 1, r + 1)));
                }
            }
        }
        Ok(Self { rows })
    }

    /// Builds the tableau that places `k` at the end of row `row_of[k - 1]`
    /// (0-based rows), for `k = 1..=n` in order.
    pub fn from_row_word(row_of: &[u8]) -> Result<Self> {
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for (k, &r) in row_of.iter().enumerate() {
            let r = r as usize;
            if r == rows.len() {
                rows.push(Vec::new());
            } else if r > rows.len() {
                return Err(Error::InvalidTableau(format!("entry {} skips a row", k + 1)));
            }
            rows[r].push(k + 1);
        }
        Self::new(rows)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeTableauPair {
    pub p: Tableau,
    pub q: Tableau,
}

impl ShapeTableauPair {
    pub fn new(p: Tableau, q: Tableau) -> Result<Self> {
        if p.shape() != q.shape() {
            return Err(Error::InvalidTableau(format!(
                "shapes differ: {:?} vs {:?}",
                p.shape(),
                q.shape()
            )));
        }
        Ok(Self { p, q })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.p.shape()
    }
}

/// Insertion tableau `P` and recording tableau `Q` of `σ`.
pub fn rsk(sigma: &Permutation) -> ShapeTableauPair {
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in sigma.values().iter().enumerate() {
        let mut x = v;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                q.push(vec![i + 1]);
                break;
            }
            let row = &mut p[r];
            let k = row.partition_point(|&y| y < x);
            if k == row.len() {
                row.push(x);
                q[r].push(i + 1);
                break;
            }
            x = std::mem::replace(&mut row[k], x);
            r += 1;
        }
    }
    ShapeTableauPair { p: Tableau { rows: p }, q: Tableau { rows: q } }
}

/// Reverse bumping: removes the cell of `Q` holding `k` for `k = n, …, 1`.
pub fn inverse_rsk(pair: &ShapeTableauPair) -> Permutation {
    let n = pair.p.size();
    let mut row_of = vec![0usize; n + 1];
    for (r, row) in pair.q.rows.iter().enumerate() {
        for &k in row {
            row_of[k] = r;
        }
    }
    let mut p = pair.p.rows.clone();
    let mut values = vec![0usize; n];
    for k in (1..=n).rev() {
        let r0 = row_of[k];
        let mut x = p[r0].pop().expect("cell of Q is a corner of P");
        for r in (0..r0).rev() {
            let row = &mut p[r];
            // largest entry smaller than x
            let j = row.partition_point(|&y| y < x) - 1;
            x = std::mem::replace(&mut row[j], x);
        }
        values[k - 1] = x;
    }
    Permutation::from_values_unchecked(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_perms(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut v: Vec<usize> = (1..=n).collect();
        fn heap(k: usize, v: &mut Vec<usize>, out: &mut Vec<Permutation>) {
            if k <= 1 {
                out.push(Permutation::new(v.clone()).unwrap());
                return;
            }
            for i in 0..k {
                heap(k - 1, v, out);
                let j = if k.is_multiple_of(2) { i } else { 0 };
                v.swap(j, k - 1);
            }
        }
        heap(n, &mut v, &mut out);
        out
    }

    #[test]
    fn identity_is_one_row() {
        let pair = rsk(&Permutation::identity(5));
        assert_eq!(pair.p.rows(), &[vec![1, 2, 3, 4, 5]]);
        assert_eq!(pair.p, pair.q);
    }

    #[test]
    fn transposition_is_one_column() {
        let pair = rsk(&"2 1".parse().unwrap());
        assert_eq!(pair.p.rows(), &[vec![1], vec![2]]);
        assert_eq!(pair.p, pair.q);
    }

    #[test]
    fn round_trip_on_s6() {
        let perms = all_perms(6);
        assert_eq!(perms.len(), 720);
        for sigma in perms {
            let pair = rsk(&sigma);
            Tableau::new(pair.p.rows().to_vec()).unwrap();
            Tableau::new(pair.q.rows().to_vec()).unwrap();
            assert_eq!(pair.shape().len(), sigma.longest_decreasing());
            assert_eq!(inverse_rsk(&pair), sigma);
        }
    }

    #[test]
    fn rejects_malformed_tableaux() {
        assert!(Tableau::new(vec![vec![2, 1]]).is_err());
        assert!(Tableau::new(vec![vec![1, 2], vec![2]]).is_err());
        assert!(Tableau::new(vec![vec![1, 3], vec![2, 4], vec![5, 6]]).is_ok());
        assert!(Tableau::new(vec![vec![1, 4], vec![2, 3]]).is_err());
        assert!(Tableau::new(vec![vec![1], vec![2, 3]]).is_err());
        let p = Tableau::new(vec![vec![1, 2]]).unwrap();
        let q = Tableau::new(vec![vec![1], vec![2]]).unwrap();
        assert!(ShapeTableauPair::new(p, q).is_err());
    }

    #[test]
    fn row_word_builds_tableau() {
        let t = Tableau::from_row_word(&[0, 0, 1, 0, 1]).unwrap();
        assert_eq!(t.rows(), &[vec![1, 2, 4], vec![3, 5]]);
        assert!(Tableau::from_row_word(&[0, 1, 1]).is_err());
    }
}
