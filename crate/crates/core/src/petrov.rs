//! Moderate-deviation window conditions on the letter counts of a word pair.
//!
//! `Petrov(m)` asks, for every letter `l` and both words, that
//!
//! * on every window `[i, j] ⊆ [0, m]` with `j - i > m^0.1` the count of `l`
//!   deviates from `(j - i)/d` by less than `(2d)^-2 (j - i)^0.6`, and
//! * on every window with `j - i < m^0.4` the deviation is below `(2d)^-2 m^0.25`.
//!
//! The constants make the condition asymptotic: a window of length one
//! qualifies as soon as `m >= 2`, and its deviation is at least `1/d`, which
//! exceeds `(2d)^-2 m^0.25` until `m > 256 d^4`. So `Petrov(m)` fails for every
//! word pair whenever `2 <= m <= 256 d^4`. The checker is exact and does not
//! special-case that regime.

use serde::Serialize;

use crate::words::LayeredWords;

/// Windows strictly longer than `m^LARGE_WINDOW_EXPONENT` get the length-dependent bound.
pub const LARGE_WINDOW_EXPONENT: f64 = 0.1;
/// Windows strictly shorter than `m^SMALL_WINDOW_EXPONENT` get the `m`-dependent bound.
pub const SMALL_WINDOW_EXPONENT: f64 = 0.4;
pub const LARGE_BOUND_EXPONENT: f64 = 0.6;
pub const SMALL_BOUND_EXPONENT: f64 = 0.25;

/// The common prefactor `(2d)^-2`.
pub fn bound_scale(d: usize) -> f64 {
    let two_d = 2.0 * d as f64;
    1.0 / (two_d * two_d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Word {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Large,
    Small,
}

/// The first failing window found by the scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PetrovViolation {
    pub letter: usize,
    pub word: Word,
    pub start: usize,
    pub end: usize,
    pub kind: WindowKind,
    pub deviation: f64,
    pub bound: f64,
}

/// `Petrov(m)` for `m <= n`.
pub fn petrov(omega: &LayeredWords, m: usize) -> bool {
    petrov_violation(omega, m).is_none()
}

/// `Petrov*(m)`: `Petrov(m)` for the reversal `ω*` of the length-`n` words.
pub fn petrov_star(omega: &LayeredWords, m: usize) -> bool {
    petrov(&omega.reversed(), m)
}

pub fn petrov_violation(omega: &LayeredWords, m: usize) -> Option<PetrovViolation> {
    window_violation(omega, m, 0, m)
}

/// Scans every window `[i, j]` with `lo <= i <= j <= hi`, using the
/// thresholds of `Petrov(base)`. Windows are visited by increasing length,
/// then letter, then word, then start, and the scan stops at the first failure.
pub fn window_violation(
    omega: &LayeredWords,
    base: usize,
    lo: usize,
    hi: usize,
) -> Option<PetrovViolation> {
    assert!(lo <= hi && hi <= omega.n(), "window [{lo}, {hi}] outside [0, {}]", omega.n());
    let d = omega.d();
    let df = d as f64;
    let scale = bound_scale(d);
    let base_f = base as f64;
    let large_from = base_f.powf(LARGE_WINDOW_EXPONENT);
    let small_below = base_f.powf(SMALL_WINDOW_EXPONENT);
    let small_bound = scale * base_f.powf(SMALL_BOUND_EXPONENT);

    for len in 0..=(hi - lo) {
        let lf = len as f64;
        let small = lf < small_below;
        let large = lf > large_from;
        if !small && !large {
            continue;
        }
        // A window is checked against every bound that applies to it; the
        // tighter one decides.
        let large_bound = scale * lf.powf(LARGE_BOUND_EXPONENT);
        let (bound, kind) = match (small, large) {
            (true, true) if large_bound < small_bound => (large_bound, WindowKind::Large),
            (true, _) => (small_bound, WindowKind::Small),
            _ => (large_bound, WindowKind::Large),
        };
        // |count - len/d| < bound  <=>  |d*count - len| < d*bound
        let limit = df * bound;
        for l in 1..=d {
            for (word, table) in [(Word::A, omega.count_table_a(l)), (Word::B, omega.count_table_b(l))]
            {
                for i in lo..=(hi - len) {
                    let count = (table[i + len] - table[i]) as i64;
                    let delta = (d as i64 * count - len as i64).abs() as f64;
                    if delta >= limit {
                        return Some(PetrovViolation {
                            letter: l,
                            word,
                            start: i,
                            end: i + len,
                            kind,
                            deviation: delta / df,
                            bound,
                        });
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use crate::sampler::sample_lazy_walk;

    /// Direct transcription of the four inequalities, scanning all windows.
    fn petrov_oracle(w: &LayeredWords, m: usize) -> bool {
        let d = w.d() as f64;
        let c = 1.0 / (2.0 * d).powi(2);
        let mf = m as f64;
        for l in 1..=w.d() {
            for i in 0..=m {
                for j in i..=m {
                    let len = (j - i) as f64;
                    for count in [
                        w.count_a(l, j) as f64 - w.count_a(l, i) as f64,
                        w.count_b(l, j) as f64 - w.count_b(l, i) as f64,
                    ] {
                        let dev = (count - len / d).abs();
                        if len > mf.powf(0.1) && dev >= c * len.powf(0.6) {
                            return false;
                        }
                        if len < mf.powf(0.4) && dev >= c * mf.powf(0.25) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn m_one_always_holds() {
        let mut rng = SeededRng::new(7, 0);
        for d in 2..=4 {
            for _ in 0..20 {
                let w = sample_lazy_walk(5, d, &mut rng);
                assert!(petrov(&w, 1));
                assert!(petrov(&w, 0));
            }
        }
    }

    #[test]
    fn d2_m2_always_fails() {
        let mut rng = SeededRng::new(8, 0);
        for _ in 0..50 {
            let w = sample_lazy_walk(4, 2, &mut rng);
            let v = petrov_violation(&w, 2).expect("must fail");
            assert_eq!(v.end - v.start, 1);
            assert_eq!(v.kind, WindowKind::Small);
        }
    }

    #[test]
    fn fails_throughout_the_small_m_regime() {
        // 2 <= m <= 256 d^4: length-one windows always violate the small-window bound.
        let mut rng = SeededRng::new(9, 1);
        let w = sample_lazy_walk(400, 2, &mut rng);
        for m in 2..=400 {
            let v = petrov_violation(&w, m).unwrap();
            assert_eq!(v.end - v.start, 1, "m={m}");
        }
    }

    #[test]
    fn matches_oracle_on_random_words() {
        let mut rng = SeededRng::new(10, 2);
        for d in 1..=3 {
            for n in [0usize, 1, 2, 3, 7, 12] {
                for _ in 0..10 {
                    let w = sample_lazy_walk(n, d, &mut rng);
                    for m in 0..=n {
                        assert_eq!(petrov(&w, m), petrov_oracle(&w, m), "d={d} n={n} m={m} {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn large_iid_words_fail_at_desk_scale() {
        // Even at m = 10^5 the small-window bound (2d)^-2 m^0.25 is about one
        // letter while windows of length m^0.4 fluctuate by several.
        let mut rng = SeededRng::new(11, 3);
        let w = sample_lazy_walk(100_000, 2, &mut rng);
        assert!(!petrov(&w, 100_000));
    }

    #[test]
    fn star_uses_reversal() {
        let w = LayeredWords::new(vec![1, 2, 2], vec![2, 1, 2], 2).unwrap();
        assert_eq!(petrov_star(&w, 1), petrov(&w.reversed(), 1));
    }
}
