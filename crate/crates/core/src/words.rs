//! Pairs of words `ω = (a, b)` over the alphabet `{1, …, d}` together with
//! the prefix-count and occurrence-position tables used everywhere else.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A pair of words of equal length `n` over `{1, …, d}`.
///
/// Positions are 1-based throughout, matching the one-line notation of
/// [`Permutation`](crate::Permutation). `count_a(l, m)` is the number of
/// occurrences of `l` among `a(1), …, a(m)` and `pos_a(l, t)` is the position
/// of the `t`-th occurrence of `l` in `a`, or `n` when `l` occurs fewer than
/// `t` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredWords {
    d: usize,
    a: Vec<u8>,
    b: Vec<u8>,
    count_a: Vec<Vec<u32>>,
    count_b: Vec<Vec<u32>>,
    occ_a: Vec<Vec<u32>>,
    occ_b: Vec<Vec<u32>>,
}

fn tables(word: &[u8], d: usize) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let n = word.len();
    let mut counts = vec![vec![0u32; n + 1]; d];
    let mut occ = vec![Vec::new(); d];
    for (idx, &letter) in word.iter().enumerate() {
        let l = letter as usize - 1;
        for (k, row) in counts.iter_mut().enumerate() {
            row[idx + 1] = row[idx] + u32::from(k == l);
        }
        occ[l].push(idx as u32 + 1);
    }
    (counts, occ)
}

impl LayeredWords {
    pub fn new(a: Vec<u8>, b: Vec<u8>, d: usize) -> Result<Self> {
        if d == 0 || d > 9 {
            return Err(Error::InvalidWords(format!("alphabet size d={d} must lie in 1..=9")));
        }
        if a.len() != b.len() {
            return Err(Error::InvalidWords(format!(
                "words have different lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        for (name, w) in [("a", &a), ("b", &b)] {
            if let Some(pos) = w.iter().position(|&c| c == 0 || c as usize > d) {
                return Err(Error::InvalidWords(format!(
                    "letter {} at position {} of {name} is outside 1..={d}",
                    w[pos],
                    pos + 1
                )));
            }
        }
        let (count_a, occ_a) = tables(&a, d);
        let (count_b, occ_b) = tables(&b, d);
        Ok(Self { d, a, b, count_a, count_b, occ_a, occ_b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &[u8] {
        &self.a
    }

    pub fn b(&self) -> &[u8] {
        &self.b
    }

    pub fn count_a(&self, l: usize, m: usize) -> usize {
        self.count_a[l - 1][m] as usize
    }

    pub fn count_b(&self, l: usize, m: usize) -> usize {
        self.count_b[l - 1][m] as usize
    }

    /// Prefix-count table of letter `l` in `a`, indexed by `m = 0..=n`.
    pub fn count_table_a(&self, l: usize) -> &[u32] {
        &self.count_a[l - 1]
    }

    pub fn count_table_b(&self, l: usize) -> &[u32] {
        &self.count_b[l - 1]
    }

    pub fn pos_a(&self, l: usize, t: usize) -> usize {
        pos(&self.occ_a[l - 1], t, self.n())
    }

    pub fn pos_b(&self, l: usize, t: usize) -> usize {
        pos(&self.occ_b[l - 1], t, self.n())
    }

    /// `diff^l(m) = count_a^l(m) - count_b^l(m)`.
    pub fn diff(&self, l: usize, m: usize) -> i64 {
        self.count_a(l, m) as i64 - self.count_b(l, m) as i64
    }

    /// Every letter occurs equally often in `a` and `b`.
    pub fn in_omega_n(&self) -> bool {
        self.first_unbalanced().is_none()
    }

    pub(crate) fn first_unbalanced(&self) -> Option<Error> {
        let n = self.n();
        (1..=self.d).find_map(|l| {
            let (in_a, in_b) = (self.count_a(l, n), self.count_b(l, n));
            (in_a != in_b).then_some(Error::NotInOmega { letter: l, in_a, in_b })
        })
    }

    pub(crate) fn require_omega(&self) -> Result<()> {
        match self.first_unbalanced() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// `ω* = (a*, b*)` with `a*(i) = a(n + 1 - i)`.
    pub fn reversed(&self) -> Self {
        let a: Vec<u8> = self.a.iter().rev().copied().collect();
        let b: Vec<u8> = self.b.iter().rev().copied().collect();
        Self::new(a, b, self.d).expect("reversal preserves validity")
    }

    /// `(b, a)`: the path of the swapped pair is the negated path.
    pub fn swapped(&self) -> Self {
        Self::new(self.b.clone(), self.a.clone(), self.d).expect("swap preserves validity")
    }

    /// The first `m` letters of both words.
    pub fn prefix(&self, m: usize) -> Self {
        Self::new(self.a[..m].to_vec(), self.b[..m].to_vec(), self.d)
            .expect("prefix preserves validity")
    }
}

fn pos(occ: &[u32], t: usize, n: usize) -> usize {
    match t {
        0 => 0,
        t if t <= occ.len() => occ[t - 1] as usize,
        _ => n,
    }
}

impl fmt::Display for LayeredWords {
    /// Two comma-separated digit strings, e.g. `112,211`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.a {
            write!(f, "{c}")?;
        }
        f.write_str(",")?;
        for &c in &self.b {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl LayeredWords {
    /// Parses `a,b` digit strings; `d` is the alphabet size.
    pub fn parse(s: &str, d: usize) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once(',')
            .ok_or_else(|| Error::InvalidWords(format!("expected `a,b`, got {s:?}")))?;
        let digits = |w: &str| -> Result<Vec<u8>> {
            w.trim()
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|v| v as u8)
                        .ok_or_else(|| Error::InvalidWords(format!("non-digit {c:?}")))
                })
                .collect()
        };
        Self::new(digits(a)?, digits(b)?, d)
    }
}

impl FromStr for LayeredWords {
    type Err = Error;

    /// Parses with the alphabet size taken as the largest letter present.
    fn from_str(s: &str) -> Result<Self> {
        let d = s.chars().filter_map(|c| c.to_digit(10)).max().unwrap_or(1).max(1);
        Self::parse(s, d as usize)
    }
}
