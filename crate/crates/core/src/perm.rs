//! Permutations, containment of patterns, and the decomposition of a
//! permutation with no long decreasing subsequence into increasing layers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::words::LayeredWords;

/// A permutation of `{1, …, n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n + 1];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} at position {} is outside 1..={n}",
                    i + 1
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn from_values_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok());
        Self { values }
    }

    pub fn identity(n: usize) -> Self {
        Self { values: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `σ(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { values: inv }
    }

    /// Length of the longest decreasing subsequence (patience sorting).
    pub fn longest_decreasing(&self) -> usize {
        let n = self.len();
        let mut tails: Vec<usize> = Vec::new();
        for &v in &self.values {
            let x = n + 1 - v;
            let k = tails.partition_point(|&t| t < x);
            if k == tails.len() {
                tails.push(x);
            } else {
                tails[k] = x;
            }
        }
        tails.len()
    }

    /// Whether `σ ∈ Av_n(ρ_d)`, i.e. it has no decreasing subsequence of length `d + 1`.
    pub fn avoids_decreasing(&self, d: usize) -> bool {
        self.longest_decreasing() <= d
    }
}

impl fmt::Display for Permutation {
    /// Space-separated one-line notation, e.g. `2 3 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| Error::InvalidPermutation(format!("{tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// Whether some subsequence of `sigma` is order-isomorphic to `rho`.
pub fn contains_pattern(sigma: &Permutation, rho: &Permutation) -> Result<bool> {
    if rho.len() > sigma.len() {
        return Err(Error::PatternTooLong { pattern: rho.len(), len: sigma.len() });
    }
    fn extend(sigma: &[usize], rho: &[usize], start: usize, chosen: &mut Vec<usize>) -> bool {
        let k = chosen.len();
        if k == rho.len() {
            return true;
        }
        // Leave room for the remaining pattern entries.
        let last = sigma.len() - (rho.len() - k);
        for i in start..=last {
            let v = sigma[i];
            let consistent = chosen
                .iter()
                .zip(rho)
                .all(|(&c, &r)| (v > c) == (rho[k] > r));
            if consistent {
                chosen.push(v);
                if extend(sigma, rho, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    Ok(extend(sigma.values(), rho.values(), 0, &mut Vec::with_capacity(rho.len())))
}

/// Largest `n` that [`enumerate_avoiders`] accepts without an explicit override.
pub const DEFAULT_ENUMERATION_GUARD: usize = 10;

/// All of `Av_n(ρ_d)` in lexicographic order.
pub fn enumerate_avoiders(n: usize, d: usize) -> Result<Vec<Permutation>> {
    enumerate_avoiders_with_guard(n, d, DEFAULT_ENUMERATION_GUARD)
}

pub fn enumerate_avoiders_with_guard(n: usize, d: usize, guard: usize) -> Result<Vec<Permutation>> {
    if n > guard {
        return Err(Error::EnumerationGuard { n, guard });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    // Current maxima of the greedy layers; the layer count of a prefix equals
    // its longest decreasing subsequence, so it prunes exactly.
    let mut maxima: Vec<usize> = Vec::with_capacity(d + 1);
    fn rec(
        n: usize,
        d: usize,
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        maxima: &mut Vec<usize>,
        out: &mut Vec<Permutation>,
    ) {
        if prefix.len() == n {
            out.push(Permutation { values: prefix.clone() });
            return;
        }
        for v in 1..=n {
            if used[v] {
                continue;
            }
            let l = maxima.partition_point(|&m| m > v);
            if l >= d {
                continue;
            }
            let saved = maxima.get(l).copied();
            if l == maxima.len() {
                maxima.push(v);
            } else {
                maxima[l] = v;
            }
            used[v] = true;
            prefix.push(v);
            rec(n, d, prefix, used, maxima, out);
            prefix.pop();
            used[v] = false;
            match saved {
                Some(m) => maxima[l] = m,
                None => {
                    maxima.pop();
                }
            }
        }
    }
    rec(n, d, &mut prefix, &mut used, &mut maxima, &mut out);
    Ok(out)
}

/// The partition of positions into layers `A^1, …, A^d` obtained by
/// repeatedly removing the left-to-right maxima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    d: usize,
    labels: Vec<u8>,
    values: Vec<usize>,
}

impl LayerDecomposition {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Layer label (1-based) of position `i` (1-based).
    pub fn label(&self, i: usize) -> usize {
        self.labels[i - 1] as usize
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Positions in `A^l`, increasing. Layers beyond the last nonempty one are empty.
    pub fn layer(&self, l: usize) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.label(i) == l).collect()
    }

    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut layers = vec![Vec::new(); self.d];
        for (i, &l) in self.labels.iter().enumerate() {
            layers[l as usize - 1].push(i + 1);
        }
        layers
    }

    /// `α^l = {(i, σ(i)) : i ∈ A^l}` in increasing `i`.
    pub fn sequence(&self, l: usize) -> Vec<(usize, usize)> {
        self.layer(l).into_iter().map(|i| (i, self.values[i - 1])).collect()
    }

    pub fn nonempty_layers(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0) as usize
    }
}

/// Iterated left-to-right-maxima peeling with at most `d` layers.
pub fn layer_decompose(sigma: &Permutation, d: usize) -> Result<LayerDecomposition> {
    let mut maxima: Vec<usize> = Vec::with_capacity(d);
    let mut labels = Vec::with_capacity(sigma.len());
    for (idx, &v) in sigma.values().iter().enumerate() {
        // maxima is strictly decreasing; v joins the first layer whose maximum it exceeds
        let l = maxima.partition_point(|&m| m > v);
        if l >= d {
            return Err(Error::TooManyLayers { index: idx + 1, layer: l + 1, d });
        }
        if l == maxima.len() {
            maxima.push(v);
        } else {
            maxima[l] = v;
        }
        labels.push(l as u8 + 1);
    }
    Ok(LayerDecomposition { d, labels, values: sigma.values().to_vec() })
}

/// `ω_σ`: `a(i)` is the layer of position `i`, `b(j)` the layer of the point with value `j`.
pub fn words_from_perm(sigma: &Permutation, d: usize) -> Result<LayeredWords> {
    let layers = layer_decompose(sigma, d)?;
    Ok(words_from_layers(sigma, &layers))
}

pub fn words_from_layers(sigma: &Permutation, layers: &LayerDecomposition) -> LayeredWords {
    let a = layers.labels().to_vec();
    let mut b = vec![0u8; sigma.len()];
    for (i, &v) in sigma.values().iter().enumerate() {
        b[v - 1] = a[i];
    }
    LayeredWords::new(a, b, layers.d()).expect("labels lie in 1..=d")
}

/// `σ_ω`: the `t`-th occurrence of `l` in `a` is sent to the `t`-th occurrence of `l` in `b`.
pub fn perm_from_words(omega: &LayeredWords) -> Result<Permutation> {
    omega.require_omega()?;
    let n = omega.n();
    let mut values = vec![0; n];
    for l in 1..=omega.d() {
        for t in 1..=omega.count_a(l, n) {
            values[omega.pos_a(l, t) - 1] = omega.pos_b(l, t);
        }
    }
    Ok(Permutation::from_values_unchecked(values))
}

/// `Mat(ω)`: the permutation matrix of `σ_ω` with each entry carrying its letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMatrix {
    col: Vec<usize>,
    label: Vec<u8>,
}

impl LabelMatrix {
    pub fn n(&self) -> usize {
        self.col.len()
    }

    /// Label at 1-based `(i, j)`, or 0.
    pub fn get(&self, i: usize, j: usize) -> u8 {
        if self.col[i - 1] == j {
            self.label[i - 1]
        } else {
            0
        }
    }

    /// Nonzero entries `(i, j, label)` in increasing row order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.col.iter().zip(&self.label).enumerate().map(|(i, (&j, &l))| (i + 1, j, l))
    }

    /// Every nonzero entry labelled `l` has, strictly to its upper left
    /// (smaller row, larger column), an entry of every label `l' < l` and no
    /// entry of any label `l' >= l`.
    pub fn is_proper(&self) -> bool {
        let d = self.label.iter().copied().max().unwrap_or(0) as usize;
        // Largest column seen so far per label, over rows already scanned.
        let mut max_col = vec![0usize; d + 1];
        for (i, &j) in self.col.iter().enumerate() {
            let l = self.label[i] as usize;
            let below_present = (1..l).all(|lp| max_col[lp] > j);
            let none_above = (l..=d).all(|lp| max_col[lp] < j);
            if !(below_present && none_above) {
                return false;
            }
            max_col[l] = max_col[l].max(j);
        }
        true
    }
}

pub fn label_matrix(omega: &LayeredWords) -> Result<LabelMatrix> {
    omega.require_omega()?;
    let n = omega.n();
    let mut col = vec![0; n];
    let mut label = vec![0u8; n];
    for l in 1..=omega.d() {
        for t in 1..=omega.count_a(l, n) {
            let i = omega.pos_a(l, t);
            col[i - 1] = omega.pos_b(l, t);
            label[i - 1] = l as u8;
        }
    }
    Ok(LabelMatrix { col, label })
}

pub fn is_proper(omega: &LayeredWords) -> Result<bool> {
    Ok(label_matrix(omega)?.is_proper())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(contains_pattern(&p("2 3 1"), &p("2 1")).unwrap());
        assert!(!contains_pattern(&Permutation::identity(7), &p("2 1")).unwrap());
        assert!(contains_pattern(&p("4 3 2 1"), &p("4 3 2 1")).unwrap());
        assert!(matches!(
            contains_pattern(&p("1 2"), &p("3 2 1")),
            Err(Error::PatternTooLong { .. })
        ));
    }

    #[test]
    fn only_4321_contains_4321_in_s4() {
        let all = enumerate_avoiders_with_guard(4, 4, 10).unwrap();
        let rho = p("4 3 2 1");
        let hits: Vec<_> = all.iter().filter(|s| contains_pattern(s, &rho).unwrap()).collect();
        assert_eq!(hits, vec![&rho]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_avoiders(3, 2).unwrap().len(), 5);
        assert_eq!(enumerate_avoiders(4, 3).unwrap().len(), 23);
        assert_eq!(enumerate_avoiders(5, 2).unwrap().len(), 42);
        assert!(matches!(enumerate_avoiders(11, 2), Err(Error::EnumerationGuard { .. })));
    }

    #[test]
    fn enumeration_is_lexicographic_and_matches_pattern_filter() {
        let rho = p("3 2 1");
        let got = enumerate_avoiders(5, 2).unwrap();
        let want: Vec<_> = enumerate_avoiders_with_guard(5, 5, 10)
            .unwrap()
            .into_iter()
            .filter(|s| !contains_pattern(s, &rho).unwrap())
            .collect();
        assert_eq!(got, want);
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn layers_of_231() {
        let dec = layer_decompose(&p("2 3 1"), 2).unwrap();
        assert_eq!(dec.layers(), vec![vec![1, 2], vec![3]]);
        assert_eq!(dec.sequence(1), vec![(1, 2), (2, 3)]);
        assert_eq!(dec.sequence(2), vec![(3, 1)]);
    }

    #[test]
    fn layers_of_identity_and_reversal() {
        let dec = layer_decompose(&Permutation::identity(3), 3).unwrap();
        assert_eq!(dec.layers(), vec![vec![1, 2, 3], vec![], vec![]]);
        let dec = layer_decompose(&p("3 2 1"), 3).unwrap();
        assert_eq!(dec.layers(), vec![vec![1], vec![2], vec![3]]);
        let err = layer_decompose(&p("3 2 1"), 2).unwrap_err();
        assert!(matches!(err, Error::TooManyLayers { index: 3, .. }));
    }

    #[test]
    fn words_examples() {
        let w = words_from_perm(&p("2 3 1"), 2).unwrap();
        assert_eq!(w.a(), &[1, 1, 2]);
        assert_eq!(w.b(), &[2, 1, 1]);
        assert_eq!(perm_from_words(&w).unwrap(), p("2 3 1"));

        let id = words_from_perm(&Permutation::identity(5), 3).unwrap();
        assert!(id.a().iter().chain(id.b()).all(|&c| c == 1));
        assert_eq!(perm_from_words(&id).unwrap(), Permutation::identity(5));

        let w = LayeredWords::new(vec![1, 2], vec![2, 1], 2).unwrap();
        assert_eq!(perm_from_words(&w).unwrap(), p("2 1"));
    }

    #[test]
    fn perm_from_words_rejects_unbalanced() {
        let w = LayeredWords::new(vec![1, 1], vec![1, 2], 2).unwrap();
        assert!(matches!(perm_from_words(&w), Err(Error::NotInOmega { .. })));
        assert!(label_matrix(&w).is_err());
    }

    #[test]
    fn properness_examples() {
        let ones = LayeredWords::new(vec![1; 4], vec![1; 4], 3).unwrap();
        assert!(is_proper(&ones).unwrap());
        let bad = LayeredWords::new(vec![2, 1], vec![1, 2], 2).unwrap();
        let mat = label_matrix(&bad).unwrap();
        assert_eq!(mat.get(1, 2), 2);
        assert_eq!(mat.get(2, 1), 1);
        assert!(!mat.is_proper());
    }

    #[test]
    fn text_format() {
        assert_eq!(p("2 3 1").to_string(), "2 3 1");
        assert!("1 1".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
    }
}
