//! Partitions, the hook length formula, the Greene–Nijenhuis–Wilf hook walk
//! and exact sampling of shapes with Plancherel-type weights `(f^λ)²`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::error::{Error, Result};
use crate::rsk::Tableau;

/// Shapes enumerated explicitly up to this many partitions; beyond it the
/// sampler switches to rejection from a Gaussian envelope.
pub const EXACT_SHAPE_LIMIT: u128 = 20_000;

pub fn validate_shape(shape: &[usize]) -> Result<()> {
    if shape.contains(&0) {
        return Err(Error::InvalidShape(format!("{shape:?} has a zero part")));
    }
    if shape.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidShape(format!("{shape:?} is not weakly decreasing")));
    }
    Ok(())
}

/// All partitions of `n` into at most `max_parts` parts, in reverse lexicographic order.
pub fn partitions(n: usize, max_parts: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, cap: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            // the remaining parts cannot exceed p each
            if p * parts < rest {
                break;
            }
            cur.push(p);
            rec(rest - p, p, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions of `n` into at most `max_parts` parts, saturating at `u128::MAX`.
pub fn partition_count(n: usize, max_parts: usize) -> u128 {
    // p_k(m) = p_{k-1}(m) + p_k(m - k)
    let mut row = vec![0u128; n + 1];
    row[0] = 1;
    for k in 1..=max_parts.min(n.max(1)) {
        for m in k..=n {
            row[m] = row[m].saturating_add(row[m - k]);
        }
    }
    row[n]
}

fn column_length(shape: &[usize], j: usize) -> usize {
    shape.partition_point(|&p| p > j)
}

fn product(factors: impl Iterator<Item = u64>) -> BigUint {
    let mut acc = BigUint::one();
    let mut chunk: u64 = 1;
    for f in factors {
        match chunk.checked_mul(f) {
            Some(c) => chunk = c,
            None => {
                acc *= chunk;
                chunk = f;
            }
        }
    }
    acc * chunk
}

/// `f^λ = n!/∏ hooks`, the number of standard Young tableaux of shape `λ`.
pub fn hook_lengths(shape: &[usize]) -> Result<BigUint> {
    validate_shape(shape)?;
    let n: usize = shape.iter().sum();
    let hooks = shape.iter().enumerate().flat_map(|(i, &len)| {
        (0..len).map(move |j| (len - j + column_length(shape, j) - i - 1) as u64)
    });
    Ok(product(1..=n as u64) / product(hooks))
}

/// `ln f^λ` from the Frobenius form `n! ∏_{i<j}(ℓ_i - ℓ_j) / ∏ ℓ_i!` with `ℓ_i = λ_i + k - i`.
pub fn log_num_syt(shape: &[usize]) -> f64 {
    let k = shape.len();
    let n: usize = shape.iter().sum();
    let ell: Vec<f64> = shape.iter().enumerate().map(|(i, &p)| (p + k - 1 - i) as f64).collect();
    let mut s = ln_gamma(n as f64 + 1.0);
    for i in 0..k {
        for j in i + 1..k {
            s += (ell[i] - ell[j]).ln();
        }
        s -= ln_gamma(ell[i] + 1.0);
    }
    s
}

/// `Σ (f^λ)²` over shapes with at most `d` rows, which counts permutations of
/// `n` with no decreasing subsequence longer than `d`.
pub fn avoider_count(n: usize, d: usize) -> BigUint {
    partitions(n, d)
        .iter()
        .map(|s| {
            let f = hook_lengths(s).expect("generated shapes are valid");
            &f * &f
        })
        .sum()
}

/// Uniform integer in `[0, bound)`, by rejection on the bit length.
pub fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let mask = if top_bits == 32 { u32::MAX } else { (1u32 << top_bits) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        digits[words - 1] &= mask;
        let x = BigUint::from_slice(&digits);
        if &x < bound {
            return x;
        }
    }
}

/// Uniform standard Young tableau of shape `λ` by repeated hook walks.
///
/// Each walk starts at a uniform cell and jumps to a uniform cell of the
/// current hook until it reaches a corner, which receives the largest
/// remaining entry.
pub fn hook_walk<R: Rng + ?Sized>(shape: &[usize], rng: &mut R) -> Result<Tableau> {
    validate_shape(shape)?;
    let mut mu = shape.to_vec();
    let n: usize = mu.iter().sum();
    let mut row_of = vec![0u8; n];
    for k in (1..=n).rev() {
        let mut r = rng.random_range(0..k);
        let mut i = 0;
        while r >= mu[i] {
            r -= mu[i];
            i += 1;
        }
        let mut j = r;
        loop {
            let arm = mu[i] - j - 1;
            let leg = column_length(&mu, j) - i - 1;
            if arm + leg == 0 {
                break;
            }
            let c = rng.random_range(0..arm + leg);
            if c < arm {
                j += c + 1;
            } else {
                i += c - arm + 1;
            }
        }
        row_of[k - 1] = i as u8;
        mu[i] -= 1;
        if mu[i] == 0 {
            mu.pop();
        }
    }
    Tableau::from_row_word(&row_of)
}

/// Draws `λ ⊢ n` with at most `d` rows with probability proportional to `(f^λ)²`.
#[derive(Clone, Debug)]
pub enum ShapeSampler {
    Exact(ExactShapes),
    Rejection(ShapeEnvelope),
}

impl ShapeSampler {
    /// Enumerates shapes when there are at most [`EXACT_SHAPE_LIMIT`] of them.
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument("need n >= 1 and d >= 1".into()));
        }
        if partition_count(n, d) <= EXACT_SHAPE_LIMIT {
            Ok(Self::Exact(ExactShapes::new(n, d)))
        } else {
            Ok(Self::Rejection(ShapeEnvelope::new(n, d)))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        match self {
            Self::Exact(s) => s.sample(rng),
            Self::Rejection(s) => s.sample(rng),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExactShapes {
    shapes: Vec<Vec<usize>>,
    cumulative: Vec<BigUint>,
}

impl ExactShapes {
    pub fn new(n: usize, d: usize) -> Self {
        let shapes = partitions(n, d);
        let mut total = BigUint::zero();
        let cumulative = shapes
            .iter()
            .map(|s| {
                let f = hook_lengths(s).expect("generated shapes are valid");
                total += &f * &f;
                total.clone()
            })
            .collect();
        Self { shapes, cumulative }
    }

    pub fn shapes(&self) -> &[Vec<usize>] {
        &self.shapes
    }

    pub fn total(&self) -> &BigUint {
        self.cumulative.last().expect("at least one shape")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let r = uniform_below(self.total(), rng);
        let k = self.cumulative.partition_point(|c| c <= &r);
        self.shapes[k].clone()
    }
}

/// Rejection sampler for `(f^λ)²` in the shifted coordinates
/// `ℓ_i = λ_i + d - i` (rows may be empty), with `ℓ_d` fixed by the total.
///
/// `φ(ℓ) = 2[Σ_{i<j} ln(ℓ_i - ℓ_j) - Σ ln Γ(ℓ_i + 1)]` is strongly concave
/// with modulus `κ = 2/(S + 1)` in the free coordinates `ℓ_1..ℓ_{d-1}`,
/// because `ψ'(x) >= 1/x`. The tangent bound at an approximate mode gives
/// `φ <= log C - κ|z - μ|²/2`, and proposals are rounded Gaussians of
/// variance `2/κ` with the rounding cell absorbed into the constant.
#[derive(Clone, Debug)]
pub struct ShapeEnvelope {
    n: usize,
    d: usize,
    total: i64,
    kappa: f64,
    mu: Vec<f64>,
    log_c: f64,
}

impl ShapeEnvelope {
    pub fn new(n: usize, d: usize) -> Self {
        let total = (n + d * (d - 1) / 2) as i64;
        let kappa = 2.0 / (total as f64 + 1.0);
        if d == 1 {
            return Self { n, d, total, kappa, mu: Vec::new(), log_c: 0.0 };
        }
        let mode = Self::approximate_mode(n, d);
        let phi_mode = log_weight(&mode).expect("mode lies in the chamber");
        let g_full: Vec<f64> = (0..d)
            .map(|i| {
                let li = mode[i] as f64;
                let s: f64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (li - mode[j] as f64)).sum();
                2.0 * (s - digamma(li + 1.0))
            })
            .collect();
        let grad: Vec<f64> = (0..d - 1).map(|k| g_full[k] - g_full[d - 1]).collect();
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        let mu = (0..d - 1).map(|k| mode[k] as f64 + grad[k] / kappa).collect();
        let log_c = phi_mode + g2 / (2.0 * kappa) + 1e-6;
        Self { n, d, total, kappa, mu, log_c }
    }

    fn approximate_mode(n: usize, d: usize) -> Vec<i64> {
        let mut ell: Vec<i64> = (0..d)
            .map(|i| (n / d + usize::from(i < n % d) + d - 1 - i) as i64)
            .collect();
        let mut best = log_weight(&ell).expect("balanced shape is valid");
        let mut step = (n / d).max(1) as i64;
        while step >= 1 {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..d {
                    for j in 0..d {
                        if i == j {
                            continue;
                        }
                        ell[i] += step;
                        ell[j] -= step;
                        match log_weight(&ell) {
                            Some(v) if v > best => {
                                best = v;
                                improved = true;
                            }
                            _ => {
                                ell[i] -= step;
                                ell[j] += step;
                            }
                        }
                    }
                }
            }
            step /= 2;
        }
        ell
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let d = self.d;
        if d == 1 {
            return vec![self.n];
        }
        let sigma = (2.0 / self.kappa).sqrt();
        let r2 = (d - 1) as f64 / 4.0;
        let offset = self.log_c + self.kappa * r2 / 2.0;
        let mut ell = vec![0i64; d];
        loop {
            let mut a2 = 0.0;
            let mut used = 0i64;
            for k in 0..d - 1 {
                let e: f64 = StandardNormal.sample(rng);
                let y = self.mu[k] + sigma * e;
                a2 += (sigma * e).powi(2);
                ell[k] = y.round() as i64;
                used += ell[k];
            }
            ell[d - 1] = self.total - used;
            let Some(phi) = log_weight(&ell) else { continue };
            let log_ratio = phi - (offset - self.kappa * a2 / 4.0);
            debug_assert!(log_ratio <= 1e-9, "envelope violated by {log_ratio}");
            let u: f64 = rng.random();
            if u.ln() < log_ratio {
                return ell
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| (l - (d - 1 - i) as i64) as usize)
                    .filter(|&p| p > 0)
                    .collect();
            }
        }
    }
}

/// `φ(ℓ)`, or `None` outside `ℓ_1 > … > ℓ_d >= 0`.
fn log_weight(ell: &[i64]) -> Option<f64> {
    if ell.last().is_some_and(|&l| l < 0) || ell.windows(2).any(|w| w[0] <= w[1]) {
        return None;
    }
    let mut s = 0.0;
    for i in 0..ell.len() {
        for j in i + 1..ell.len() {
            s += ((ell[i] - ell[j]) as f64).ln();
        }
        s -= ln_gamma(ell[i] as f64 + 1.0);
    }
    Some(2.0 * s)
}
