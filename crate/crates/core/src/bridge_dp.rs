//! Exact counts of word pairs whose path stays in the Weyl chamber, and
//! uniform sampling of chamber-confined bridges by backward transitions.
//!
//! A chamber point is stored as its gap vector `(x_1 - x_2, …, x_{d-1} - x_d)`,
//! which determines it under the zero-sum constraint. Gaps are packed into a
//! `u128` with 16 bits each.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::LayeredWords;
use crate::young::uniform_below;

const GAP_BITS: u32 = 16;
const GAP_MASK: u128 = (1 << GAP_BITS) - 1;

/// Upper bound on the number of stored states: gap vectors with sum at most `2t`, summed over `t`.
pub fn state_estimate(n: usize, d: usize) -> u128 {
    (0..=n as u128).map(|t| binomial(2 * t + d as u128 - 1, d as u128 - 1)).sum()
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The default guard admits the state space of `n = 200, d = 3`.
pub fn default_state_limit() -> u128 {
    state_estimate(200, 3)
}

#[derive(Clone, Debug)]
pub struct BridgeDPTable {
    n: usize,
    d: usize,
    layers: Vec<HashMap<u128, BigUint>>,
    steps: Vec<(u8, u8, Vec<i64>)>,
}

pub fn encode_gaps(gaps: &[i64]) -> Option<u128> {
    let mut key = 0u128;
    for (k, &g) in gaps.iter().enumerate() {
        if g < 0 || g as u128 > GAP_MASK {
            return None;
        }
        key |= (g as u128) << (GAP_BITS * k as u32);
    }
    Some(key)
}

pub fn decode_gaps(key: u128, d: usize) -> Vec<i64> {
    (0..d - 1).map(|k| ((key >> (GAP_BITS * k as u32)) & GAP_MASK) as i64).collect()
}

/// Gap vector of a zero-sum point.
pub fn gaps_of(x: &[i64]) -> Vec<i64> {
    x.windows(2).map(|w| w[0] - w[1]).collect()
}

/// The `d²` ordered letter pairs with their effect on the gap vector.
fn step_table(d: usize) -> Vec<(u8, u8, Vec<i64>)> {
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut x = vec![0i64; d];
            x[a] += 1;
            x[b] -= 1;
            out.push((a as u8 + 1, b as u8 + 1, gaps_of(&x)));
        }
    }
    out
}

fn shift(key: u128, delta: &[i64], d: usize, sign: i64) -> Option<u128> {
    let gaps: Vec<i64> = decode_gaps(key, d)
        .iter()
        .zip(delta)
        .map(|(g, s)| g + sign * s)
        .collect();
    encode_gaps(&gaps)
}

pub fn bridge_dp(n: usize, d: usize) -> Result<BridgeDPTable> {
    bridge_dp_with_limit(n, d, default_state_limit())
}

/// Builds `N(t, x)` for `t = 0..=n`, refusing when [`state_estimate`] exceeds `limit`.
pub fn bridge_dp_with_limit(n: usize, d: usize, limit: u128) -> Result<BridgeDPTable> {
    if !(2..=9).contains(&d) {
        return Err(Error::InvalidArgument(format!("d = {d} must lie in 2..=9")));
    }
    let estimate = state_estimate(n, d);
    if estimate > limit || 2 * n as u128 > GAP_MASK {
        return Err(Error::StateSpaceGuard { n, d, estimate, limit });
    }
    let steps = step_table(d);
    let mut layers = Vec::with_capacity(n + 1);
    layers.push(HashMap::from([(0u128, BigUint::one())]));
    for t in 1..=n {
        let mut next: HashMap<u128, BigUint> = HashMap::new();
        for (&key, count) in &layers[t - 1] {
            for (_, _, delta) in &steps {
                if let Some(to) = shift(key, delta, d, 1) {
                    *next.entry(to).or_default() += count;
                }
            }
        }
        layers.push(next);
    }
    Ok(BridgeDPTable { n, d, layers, steps })
}

#[derive(Serialize)]
struct StateRecord {
    gaps: Vec<i64>,
    count: String,
}

#[derive(Serialize)]
struct TableRecord {
    n: usize,
    d: usize,
    states: Vec<StateRecord>,
}

impl BridgeDPTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `N(t, x)` for the chamber point with the given gaps; zero if unreachable.
    pub fn count(&self, t: usize, gaps: &[i64]) -> BigUint {
        encode_gaps(gaps)
            .and_then(|k| self.layers[t].get(&k).cloned())
            .unwrap_or_default()
    }

    /// `N(n, 0) = |CW((0,0),(n,0))|`.
    pub fn bridge_count(&self) -> BigUint {
        self.layers[self.n].get(&0).cloned().unwrap_or_default()
    }

    /// `Σ_x N(t, x)`: all chamber-confined word pairs of length `t`.
    pub fn confined_count(&self, t: usize) -> BigUint {
        self.layers[t].values().sum()
    }

    pub fn state_count(&self, t: usize) -> usize {
        self.layers[t].len()
    }

    /// Final layer as `{n, d, states: [{gaps, count}]}`, counts as decimal strings.
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let mut states: Vec<StateRecord> = self.layers[self.n]
            .iter()
            .map(|(&k, c)| StateRecord { gaps: decode_gaps(k, self.d), count: c.to_string() })
            .collect();
        states.sort_by(|a, b| a.gaps.cmp(&b.gaps));
        serde_json::to_writer_pretty(out, &TableRecord { n: self.n, d: self.d, states })?;
        Ok(())
    }
}

/// Uniform element of `CW((0,0),(n,0))`, drawn backwards from `(n, 0)` with
/// transition weights `N(t - 1, x - step)/N(t, x)`.
pub fn sample_weyl_bridge<R: Rng + ?Sized>(table: &BridgeDPTable, rng: &mut R) -> LayeredWords {
    let (n, d) = (table.n, table.d);
    let mut a = vec![0u8; n];
    let mut b = vec![0u8; n];
    let mut key = 0u128;
    for t in (1..=n).rev() {
        let total = &table.layers[t][&key];
        let mut r = uniform_below(total, rng);
        let prev = &table.layers[t - 1];
        for (la, lb, delta) in &table.steps {
            let Some(from) = shift(key, delta, d, -1) else { continue };
            let Some(w) = prev.get(&from) else { continue };
            if &r < w {
                a[t - 1] = *la;
                b[t - 1] = *lb;
                key = from;
                break;
            }
            r -= w;
        }
        debug_assert!(a[t - 1] != 0, "transition weights must sum to N(t, x)");
    }
    debug_assert!(key.is_zero());
    LayeredWords::new(a, b, d).expect("letters lie in 1..=d")
}
