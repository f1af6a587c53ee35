//! Marginal density of `Λ(Z(t))` on the ordered zero-sum chamber.
//!
//! With `s = t(1 - t)`, `Z(t)` is `√s` times a traceless GUE matrix, so
//! `Λ(Z(t))` has density proportional to `U(λ)² exp(-|λ|²/(2s))` with respect
//! to Lebesgue measure in the free coordinates `λ_1, …, λ_{d-1}`. Writing
//! `λ = √(d/2)·v` turns this into `U(√(d/2) v)² exp(-d|v|²/(4s))`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use statrs::function::gamma::ln_gamma;

use super::cone::vandermonde_u;
use crate::error::{Error, Result};

fn check_t(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must lie in (0, 1)")));
    }
    Ok(t * (1.0 - t))
}

fn weight(lambda: &[f64], s: f64) -> f64 {
    let u = vandermonde_u(lambda);
    let r2: f64 = lambda.iter().map(|x| x * x).sum();
    u * u * (-r2 / (2.0 * s)).exp()
}

/// `∫ U(λ)² e^{-|λ|²/(2s)} dλ_1…dλ_{d-1}` over the ordered zero-sum chamber.
///
/// Obtained from the Mehta integral `∫_{R^d} Δ² e^{-|x|²/2} = (2π)^{d/2} ∏_{j<=d} j!`
/// by splitting off the mean coordinate, whose change of variables has Jacobian `d`.
pub fn closed_form_normalisation(d: usize, t: f64) -> Result<f64> {
    let s = check_t(t)?;
    let df = d as f64;
    let log_fact_prod: f64 = (1..=d).map(|j| ln_gamma(j as f64 + 1.0)).sum();
    let log_z = 0.5 * df * (2.0 * PI).ln() + 0.5 * df * df * s.ln() + log_fact_prod
        - ln_gamma(df + 1.0)
        - df.ln()
        - 0.5 * (2.0 * PI * s / df).ln();
    Ok(log_z.exp())
}

/// Adaptive Gauss–Kronrod normalisation for `d ∈ {2, 3}`.
pub fn quadrature_normalisation(d: usize, t: f64) -> Result<f64> {
    let s = check_t(t)?;
    let reach = 12.0 * s.sqrt();
    match d {
        2 => Ok(integrate(&|v| weight(&[v, -v], s), 0.0, reach, 1e-12)),
        3 => {
            let inner = |v1: f64| integrate(&|v2| weight(&[v1, v2, -v1 - v2], s), -v1 / 2.0, v1, 1e-12);
            Ok(integrate(&inner, 0.0, reach, 1e-11))
        }
        _ => Err(Error::InvalidArgument(format!("quadrature covers d = 2, 3; got {d}"))),
    }
}

fn cache() -> &'static Mutex<HashMap<(usize, u64), f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Normalising constant, by quadrature for `d <= 3` and in closed form above; cached per `(d, t)`.
pub fn normalisation(d: usize, t: f64) -> Result<f64> {
    check_t(t)?;
    let key = (d, t.to_bits());
    if let Some(&z) = cache().lock().expect("cache lock").get(&key) {
        return Ok(z);
    }
    let z = if d <= 3 { quadrature_normalisation(d, t)? } else { closed_form_normalisation(d, t)? };
    cache().lock().expect("cache lock").insert(key, z);
    Ok(z)
}

/// Normalised density of `Λ(Z(t))` at the ordered zero-sum vector `λ`.
pub fn bridge_marginal_density(d: usize, t: f64, lambda: &[f64]) -> Result<f64> {
    check_t(t)?;
    if lambda.len() != d {
        return Err(Error::DimensionMismatch(lambda.len(), d));
    }
    if d < 2 {
        return Err(Error::InvalidArgument("density needs d >= 2".into()));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(format!("{lambda:?} is not ordered")));
    }
    let sum: f64 = lambda.iter().sum();
    let scale = lambda.iter().map(|x| x.abs()).fold(1.0, f64::max);
    if sum.abs() > 1e-9 * scale {
        return Err(Error::InvalidArgument(format!("{lambda:?} does not sum to zero")));
    }
    Ok(weight(lambda, check_t(t)?) / normalisation(d, t)?)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 7-point Gauss and 15-point Kronrod estimates on `[a, b]`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let pair = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, gauss * h)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let (k, _) = gk15(f, a, b);
    let floor = rel * k.abs();
    refine(f, a, b, rel, floor, 0)
}

fn refine(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64, floor: f64, depth: u32) -> f64 {
    let (k, g) = gk15(f, a, b);
    if (k - g).abs() <= (rel * k.abs()).max(floor) || depth >= 40 {
        return k;
    }
    let m = 0.5 * (a + b);
    refine(f, a, m, rel, floor / 2.0, depth + 1) + refine(f, m, b, rel, floor / 2.0, depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_matches_closed_form() {
        for d in [2, 3] {
            for t in [0.1, 0.25, 0.5, 0.8] {
                let q = quadrature_normalisation(d, t).unwrap();
                let c = closed_form_normalisation(d, t).unwrap();
                assert!((q / c - 1.0).abs() < 1e-8, "d={d} t={t} {q} vs {c}");
            }
        }
        let s: f64 = 0.25;
        let z2 = closed_form_normalisation(2, 0.5).unwrap();
        assert!((z2 - PI.sqrt() * s.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn density_integrates_to_one() {
        let d2 = integrate(&|v| bridge_marginal_density(2, 0.5, &[v, -v]).unwrap(), 0.0, 6.0, 1e-12);
        assert!((d2 - 1.0).abs() < 1e-5);
        let inner = |v1: f64| {
            integrate(
                &|v2| bridge_marginal_density(3, 0.5, &[v1, v2, -v1 - v2]).unwrap(),
                -v1 / 2.0,
                v1,
                1e-12,
            )
        };
        assert!((integrate(&inner, 0.0, 6.0, 1e-11) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn boundary_and_errors() {
        assert_eq!(bridge_marginal_density(3, 0.5, &[1.0, 1.0, -2.0]).unwrap(), 0.0);
        assert!(bridge_marginal_density(2, 1.0, &[1.0, -1.0]).is_err());
        assert!(bridge_marginal_density(2, 0.5, &[-1.0, 1.0]).is_err());
        assert!(bridge_marginal_density(2, 0.5, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn closed_form_d4_by_monte_carlo() {
        use crate::rng::SeededRng;
        use rand_distr::{Distribution, StandardNormal};
        // E over iid N(0, s) vectors of Δ² restricted to the ordered zero-sum part
        let (d, t) = (4usize, 0.5);
        let s: f64 = t * (1.0 - t);
        let mut rng = SeededRng::new(9, 0);
        let reps = 200_000;
        let mut acc = 0.0;
        for _ in 0..reps {
            let x: Vec<f64> = (0..d).map(|_| s.sqrt() * Distribution::<f64>::sample(&StandardNormal, &mut rng)).collect();
            let u = vandermonde_u(&x);
            acc += u * u;
        }
        // ∫_{R^d} Δ² e^{-|x|²/2s} dx = (2πs)^{d/2} E[Δ²]; the chamber integral divides by d!·d·√(2πs/d)
        let full = (2.0 * PI * s).powf(d as f64 / 2.0) * acc / reps as f64;
        let mc = full / (24.0 * d as f64 * (2.0 * PI * s / d as f64).sqrt());
        let exact = closed_form_normalisation(d, t).unwrap();
        assert!((mc / exact - 1.0).abs() < 0.05, "{mc} vs {exact}");
    }
}
