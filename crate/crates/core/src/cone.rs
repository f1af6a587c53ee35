//! Predicates describing how a word pair's path sits relative to the Weyl
//! chamber between two times, with pinned or free endpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{antitonic_l1, gaps_at_least, path_from_words, LatticePath};
use crate::petrov::window_violation;
use crate::words::LayeredWords;

/// Exponent of the time-dependent shift of the chamber in the relaxed and
/// tightened variants.
pub const SHIFT_EXPONENT: f64 = 0.4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeVariant {
    /// Confined to the chamber on `[i, j]`.
    #[serde(rename = "CW")]
    Cw,
    /// Confined to `Weyl_{m^0.4}` with every window inside `[i+1, m]` passing the Petrov bounds.
    #[serde(rename = "CW-")]
    CwMinus,
    /// Confined to the relaxed chamber `Weyl_{-m^0.4}`.
    #[serde(rename = "CW+")]
    CwPlus,
    /// Outside `Weyl_{-m^0.4}` only at times where some window inside `[i, m]` fails.
    #[serde(rename = "CW++")]
    CwPlusPlus,
    /// Distance to the chamber at most `C t^0.4` (first half) or `C (n-t)^0.4`
    /// (second half) wherever `Petrov(t)` or `Petrov*(n-t)` holds.
    #[serde(rename = "SCW++")]
    ScwPlusPlus,
    /// `CW-` from the left end to `⌊n/2⌋` and, for the reversed path, from the right end to `⌊n/2⌋`.
    #[serde(rename = "SCW-")]
    ScwMinus,
}

impl std::str::FromStr for ConeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "CW" | "cw" => Self::Cw,
            "CW-" | "cw-" | "cwminus" => Self::CwMinus,
            "CW+" | "cw+" | "cwplus" => Self::CwPlus,
            "CW++" | "cw++" | "cwplusplus" => Self::CwPlusPlus,
            "SCW++" | "scw++" | "scwplusplus" => Self::ScwPlusPlus,
            "SCW-" | "scw-" | "scwminus" => Self::ScwMinus,
            other => return Err(Error::InvalidArgument(format!("unknown cone variant {other:?}"))),
        })
    }
}

/// A pinned lattice point or `*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Any,
    At(Vec<i64>),
}

impl Endpoint {
    pub fn origin(d: usize) -> Self {
        Self::At(vec![0; d])
    }

    fn matches(&self, x: &[i64]) -> bool {
        match self {
            Self::Any => true,
            Self::At(v) => v.as_slice() == x,
        }
    }
}

/// Which time supplies the exponent base of the window thresholds in `CW-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PetrovBase {
    /// The current time `m` (right end of the window range).
    WindowEnd,
    /// The right end `j` of the whole interval.
    IntervalEnd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeOptions {
    /// The constant `C` in the `SCW++` distance bound.
    pub distance_constant: f64,
    pub petrov_base: PetrovBase,
}

impl Default for ConeOptions {
    fn default() -> Self {
        Self { distance_constant: 1.0, petrov_base: PetrovBase::WindowEnd }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeReport {
    pub variant: ConeVariant,
    pub window: (usize, usize),
    pub holds: bool,
    pub first_violation_time: Option<usize>,
}

/// A query `variant((i, start), (j, end))`.
#[derive(Clone, Debug)]
pub struct ConeQuery {
    pub variant: ConeVariant,
    pub i: usize,
    pub j: usize,
    pub start: Endpoint,
    pub end: Endpoint,
}

impl ConeQuery {
    /// `variant((0, 0), (n, 0))`.
    pub fn bridge(variant: ConeVariant, n: usize, d: usize) -> Self {
        Self { variant, i: 0, j: n, start: Endpoint::origin(d), end: Endpoint::origin(d) }
    }
}

pub fn cone_class(omega: &LayeredWords, query: &ConeQuery, opts: &ConeOptions) -> Result<ConeReport> {
    let n = omega.n();
    let d = omega.d();
    let ConeQuery { variant, i, j, .. } = *query;
    if i > j || j > n {
        return Err(Error::MalformedWindow(format!("[{i}, {j}] is not inside [0, {n}]")));
    }
    for e in [&query.start, &query.end] {
        if let Endpoint::At(v) = e {
            if v.len() != d {
                return Err(Error::DimensionMismatch(v.len(), d));
            }
        }
    }
    let symmetric = matches!(variant, ConeVariant::ScwPlusPlus | ConeVariant::ScwMinus);
    if symmetric {
        omega.require_omega()?;
        if 2 * i > n || 2 * j < n {
            return Err(Error::MalformedWindow(format!(
                "symmetric variants need i <= n/2 <= j, got [{i}, {j}] with n = {n}"
            )));
        }
    }

    let path = path_from_words(omega);
    let first_violation_time = if !query.start.matches(path.point(i)) {
        Some(i)
    } else if !query.end.matches(path.point(j)) {
        Some(j)
    } else {
        match variant {
            ConeVariant::Cw => (i..=j).find(|&m| !gaps_at_least(path.point(m), 0.0)),
            ConeVariant::CwMinus => cw_minus_violation(omega, &path, i, j, opts.petrov_base),
            ConeVariant::CwPlus => (i..=j).find(|&m| !gaps_at_least(path.point(m), -shift(m))),
            ConeVariant::CwPlusPlus => (i..=j).find(|&m| {
                !gaps_at_least(path.point(m), -shift(m))
                    && window_violation(omega, m, i, m).is_none()
            }),
            ConeVariant::ScwPlusPlus => scw_plus_plus_violation(omega, &path, i, j, opts),
            ConeVariant::ScwMinus => {
                let mid = n / 2;
                cw_minus_violation(omega, &path, i, mid, opts.petrov_base).or_else(|| {
                    // s*(m) = s(n - m) is the path of the reversed, swapped pair.
                    let rev = omega.reversed().swapped();
                    let rev_path = path_from_words(&rev);
                    cw_minus_violation(&rev, &rev_path, n - j, mid, opts.petrov_base)
                        .map(|m| n - m)
                })
            }
        }
    };
    Ok(ConeReport {
        variant,
        window: (i, j),
        holds: first_violation_time.is_none(),
        first_violation_time,
    })
}

fn shift(m: usize) -> f64 {
    (m as f64).powf(SHIFT_EXPONENT)
}

fn cw_minus_violation(
    omega: &LayeredWords,
    path: &LatticePath,
    i: usize,
    j: usize,
    base: PetrovBase,
) -> Option<usize> {
    (i..=j).find(|&m| {
        if !gaps_at_least(path.point(m), shift(m)) {
            return true;
        }
        let b = match base {
            PetrovBase::WindowEnd => m,
            PetrovBase::IntervalEnd => j,
        };
        m > i && window_violation(omega, b, i + 1, m).is_some()
    })
}

fn scw_plus_plus_violation(
    omega: &LayeredWords,
    path: &LatticePath,
    i: usize,
    j: usize,
    opts: &ConeOptions,
) -> Option<usize> {
    let n = omega.n();
    let c = opts.distance_constant;
    let reversed = omega.reversed();
    (i..=j).find(|&t| {
        let dist = antitonic_l1(path.point(t)) as f64;
        let mut bad = false;
        if 2 * t <= n && dist > c * (t as f64).powf(SHIFT_EXPONENT) {
            bad |= window_violation(omega, t, 0, t).is_none();
        }
        if 2 * t >= n && dist > c * ((n - t) as f64).powf(SHIFT_EXPONENT) {
            bad |= window_violation(&reversed, n - t, 0, n - t).is_none();
        }
        bad
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{enumerate_avoiders, words_from_perm};
    use crate::rng::SeededRng;
    use crate::sampler::sample_lazy_walk;

    fn words(a: &[u8], b: &[u8], d: usize) -> LayeredWords {
        LayeredWords::new(a.to_vec(), b.to_vec(), d).unwrap()
    }

    fn holds(w: &LayeredWords, v: ConeVariant) -> bool {
        cone_class(w, &ConeQuery::bridge(v, w.n(), w.d()), &ConeOptions::default())
            .unwrap()
            .holds
    }

    #[test]
    fn constant_words_stay_in_the_chamber() {
        let w = words(&[2, 2, 1, 3], &[2, 2, 1, 3], 3);
        assert!(holds(&w, ConeVariant::Cw));
        assert!(holds(&w, ConeVariant::CwPlus));
    }

    #[test]
    fn exit_is_reported() {
        let w = words(&[2, 1], &[1, 2], 2);
        let r = cone_class(&w, &ConeQuery::bridge(ConeVariant::Cw, 2, 2), &ConeOptions::default())
            .unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_violation_time, Some(1));
        // gap -2 at m = 1 is also below -1^0.4
        assert!(!holds(&w, ConeVariant::CwPlus));
    }

    #[test]
    fn endpoint_mismatch() {
        let w = words(&[1, 1], &[2, 2], 2);
        let r = cone_class(&w, &ConeQuery::bridge(ConeVariant::Cw, 2, 2), &ConeOptions::default())
            .unwrap();
        assert_eq!(r.first_violation_time, Some(2));
        let q = ConeQuery {
            variant: ConeVariant::Cw,
            i: 0,
            j: 2,
            start: Endpoint::origin(2),
            end: Endpoint::Any,
        };
        assert!(cone_class(&w, &q, &ConeOptions::default()).unwrap().holds);
    }

    #[test]
    fn malformed_windows() {
        let w = words(&[1, 2], &[2, 1], 2);
        let mut q = ConeQuery::bridge(ConeVariant::Cw, 2, 2);
        q.i = 2;
        q.j = 1;
        assert!(matches!(cone_class(&w, &q, &ConeOptions::default()), Err(Error::MalformedWindow(_))));
        q.i = 0;
        q.j = 3;
        assert!(cone_class(&w, &q, &ConeOptions::default()).is_err());
        let q = ConeQuery { variant: ConeVariant::ScwPlusPlus, i: 2, j: 2, start: Endpoint::Any, end: Endpoint::Any };
        assert!(cone_class(&w, &q, &ConeOptions::default()).is_err());
    }

    #[test]
    fn avoiders_are_in_scw_plus_plus() {
        for n in 1..=7 {
            for sigma in enumerate_avoiders(n, 3).unwrap() {
                let w = words_from_perm(&sigma, 3).unwrap();
                assert!(holds(&w, ConeVariant::ScwPlusPlus), "{sigma}");
            }
        }
    }

    #[test]
    fn cw_minus_fails_once_windows_qualify() {
        // Any length-one window at m >= 2 breaks the window bounds.
        let w = words(&[1, 1, 2, 2], &[2, 1, 1, 2], 2);
        let r = cone_class(&w, &ConeQuery::bridge(ConeVariant::CwMinus, 4, 2), &ConeOptions::default())
            .unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn cw_plus_plus_contains_cw_plus() {
        let mut rng = SeededRng::new(3, 0);
        for _ in 0..200 {
            let w = sample_lazy_walk(12, 3, &mut rng);
            if holds(&w, ConeVariant::CwPlus) {
                let q = ConeQuery { variant: ConeVariant::CwPlusPlus, i: 0, j: 12, start: Endpoint::Any, end: Endpoint::Any };
                let mut q2 = q.clone();
                q2.variant = ConeVariant::CwPlus;
                let plus = cone_class(&w, &q2, &ConeOptions::default()).unwrap().holds;
                let pp = cone_class(&w, &q, &ConeOptions::default()).unwrap().holds;
                assert!(!plus || pp);
            }
        }
    }

    #[test]
    fn cw_is_reversal_symmetric_for_bridges() {
        let mut rng = SeededRng::new(4, 0);
        let mut seen_true = 0;
        for _ in 0..3000 {
            let w = sample_lazy_walk(8, 3, &mut rng);
            if !w.in_omega_n() {
                continue;
            }
            let fwd = holds(&w, ConeVariant::Cw);
            let back = holds(&w.reversed().swapped(), ConeVariant::Cw);
            assert_eq!(fwd, back, "{w}");
            seen_true += usize::from(fwd);
        }
        assert!(seen_true > 0);
    }

    #[test]
    fn report_serialises() {
        let w = words(&[1, 2], &[2, 1], 2);
        let r = cone_class(&w, &ConeQuery::bridge(ConeVariant::CwPlusPlus, 2, 2), &ConeOptions::default())
            .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"variant\":\"CW++\""));
        assert!(json.contains("\"first_violation_time\""));
    }
}
