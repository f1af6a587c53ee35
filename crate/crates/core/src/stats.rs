//! Two-sample Kolmogorov–Smirnov, chi-square uniformity and moment summaries.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Smallest expected class count accepted by [`chi_square_uniform`].
pub const MIN_EXPECTED: u64 = 5;
pub const DEFAULT_ALPHA: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub label: String,
    values: Vec<f64>,
}

impl Sample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("sample {label} contains {v}")));
        }
        Ok(Self { label, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestReport {
    pub description: String,
    pub statistic: f64,
    pub threshold: f64,
    pub n1: usize,
    pub n2: usize,
    pub pass: bool,
}

impl TestReport {
    fn new(description: String, statistic: f64, threshold: f64, n1: usize, n2: usize) -> Self {
        Self { description, statistic, threshold, n1, n2, pass: statistic <= threshold }
    }
}

/// `c(α) = √(-ln(α/2)/2)`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// `c(α)·√((n1 + n2)/(n1·n2))`.
pub fn ks_threshold(alpha: f64, n1: usize, n2: usize) -> f64 {
    ks_coefficient(alpha) * ((n1 + n2) as f64 / (n1 as f64 * n2 as f64)).sqrt()
}

/// Smallest equal sample size whose KS threshold is below `target`.
pub fn ks_required_size(alpha: f64, target: f64) -> usize {
    let c = ks_coefficient(alpha);
    (2.0 * c * c / (target * target)).ceil() as usize
}

/// `D = sup_x |F_A(x) - F_B(x)|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n1, n2) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    d
}

pub fn ks_two_sample(a: &Sample, b: &Sample, alpha: f64) -> Result<TestReport> {
    for s in [a, b] {
        if s.is_empty() {
            return Err(Error::EmptySample(s.label.clone()));
        }
    }
    Ok(TestReport::new(
        format!("KS {} vs {} at alpha={alpha}", a.label, b.label),
        ks_statistic(&a.values, &b.values),
        ks_threshold(alpha, a.len(), b.len()),
        a.len(),
        b.len(),
    ))
}

/// Pearson statistic of `counts` against the uniform law on the classes,
/// compared with the `1 - α` quantile of `χ²(classes - 1)`.
pub fn chi_square_uniform(counts: &[u64], total: u64, alpha: f64) -> Result<TestReport> {
    let k = counts.len();
    if k < 2 {
        return Err(Error::InvalidArgument("need at least two classes".into()));
    }
    let sum: u64 = counts.iter().sum();
    if sum != total {
        return Err(Error::InvalidArgument(format!("counts sum to {sum}, expected {total}")));
    }
    let expected = total as f64 / k as f64;
    if expected < MIN_EXPECTED as f64 {
        return Err(Error::SparseClasses { expected, required: MIN_EXPECTED * k as u64 });
    }
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    Ok(TestReport::new(
        format!("chi-square uniformity over {k} classes at alpha={alpha}"),
        stat,
        dist.inverse_cdf(1.0 - alpha),
        total as usize,
        k,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentSummary {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub se_mean: f64,
    pub se_variance: f64,
    pub se_skewness: f64,
}

/// `(mean, unbiased variance, adjusted sample skewness)` from power sums of
/// data already centred near its mean.
fn moments(n: f64, s1: f64, s2: f64, s3: f64) -> (f64, f64, f64) {
    let mean = s1 / n;
    let m2 = s2 / n - mean * mean;
    let m3 = s3 / n - 3.0 * mean * s2 / n + 2.0 * mean.powi(3);
    let variance = m2 * n / (n - 1.0);
    let skewness = if m2 > 0.0 && n > 2.0 {
        (n * (n - 1.0)).sqrt() / (n - 2.0) * m3 / m2.powf(1.5)
    } else if m2 > 0.0 {
        f64::NAN
    } else {
        0.0
    };
    (mean, variance, skewness)
}

/// Mean, unbiased variance and adjusted skewness, each with a delete-one jackknife standard error.
pub fn moment_summary(a: &Sample) -> Result<MomentSummary> {
    let n = a.len();
    if n < 2 {
        return Err(Error::EmptySample(format!("{} needs at least two values", a.label)));
    }
    let centre = a.values.iter().sum::<f64>() / n as f64;
    let ys: Vec<f64> = a.values.iter().map(|x| x - centre).collect();
    let (s1, s2, s3) = ys.iter().fold((0.0, 0.0, 0.0), |(p, q, r), y| (p + y, q + y * y, r + y * y * y));
    let nf = n as f64;
    let (mean, variance, skewness) = moments(nf, s1, s2, s3);
    let jack: Vec<(f64, f64, f64)> = ys
        .iter()
        .map(|y| moments(nf - 1.0, s1 - y, s2 - y * y, s3 - y * y * y))
        .collect();
    let se = |f: fn(&(f64, f64, f64)) -> f64| -> f64 {
        let vals: Vec<f64> = jack.iter().map(f).collect();
        let bar = vals.iter().sum::<f64>() / nf;
        ((nf - 1.0) / nf * vals.iter().map(|v| (v - bar).powi(2)).sum::<f64>()).sqrt()
    };
    Ok(MomentSummary {
        n,
        mean: mean + centre,
        variance,
        skewness,
        se_mean: se(|m| m.0),
        se_variance: se(|m| m.1),
        se_skewness: se(|m| m.2),
    })
}

/// Fixed-width text table with one line per report.
pub fn render_table(reports: &[TestReport]) -> String {
    let mut out = format!("{:<6} {:>12} {:>12} {:>8} {:>8}  {}\n", "result", "statistic", "threshold", "n1", "n2", "test");
    for r in reports {
        out.push_str(&format!(
            "{:<6} {:>12.6} {:>12.6} {:>8} {:>8}  {}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.statistic,
            r.threshold,
            r.n1,
            r.n2,
            r.description
        ));
    }
    out
}
