//! Empirical CDFs, Kolmogorov-Smirnov distances, Wilson intervals and
//! chi-square goodness of fit: the statistics that connect Monte Carlo
//! batches to closed forms.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{check_unit_open, Error, Result};

/// Moments and sorted values of a Monte Carlo batch.
#[derive(Clone, Debug, Serialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance (0 for a single sample).
    pub variance: f64,
    /// `sqrt(variance / count)`.
    pub stderr: f64,
    /// Fourth central moment (biased, `1/count` normalization).
    pub fourth_moment: f64,
    #[serde(skip)]
    sorted: Vec<f64>,
}

impl SampleSummary {
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("sample contains NaN".into()));
        }
        let count = values.len();
        let m = count as f64;
        let mean = values.iter().sum::<f64>() / m;
        let (mut s2, mut s4) = (0.0, 0.0);
        for v in &values {
            let d = v - mean;
            let d2 = d * d;
            s2 += d2;
            s4 += d2 * d2;
        }
        let variance = if count > 1 { s2 / (m - 1.0) } else { 0.0 };
        values.sort_by(f64::total_cmp);
        Ok(SampleSummary {
            count,
            mean,
            variance,
            stderr: (variance / m).sqrt(),
            fourth_moment: s4 / m,
            sorted: values,
        })
    }

    pub fn from_counts<I: IntoIterator<Item = u64>>(values: I) -> Result<Self> {
        Self::from_values(values.into_iter().map(|v| v as f64).collect())
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    /// Large-sample standard error of the sample variance,
    /// `sqrt((mu4 - sigma^4 (m-3)/(m-1)) / m)`.
    pub fn variance_stderr(&self) -> f64 {
        let m = self.count as f64;
        if self.count < 4 {
            return f64::INFINITY;
        }
        let s4 = self.variance * self.variance;
        ((self.fourth_moment - s4 * (m - 3.0) / (m - 1.0)) / m)
            .max(0.0)
            .sqrt()
    }

    /// Fraction of samples `<= x`.
    pub fn empirical_cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.count as f64
    }

    /// Fraction of samples `< x`.
    fn empirical_cdf_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.count as f64
    }
}

/// Sup distance between the sample's empirical CDF and a reference CDF,
/// taking both one-sided gaps at every distinct sample value. The left gap
/// uses the reference just below the sample value, so a reference with a
/// jump at a sample point is handled as well as a continuous one.
pub fn ks_statistic<F: Fn(f64) -> f64>(summary: &SampleSummary, cdf: F) -> f64 {
    let mut d: f64 = 0.0;
    let mut i = 0;
    let v = &summary.sorted;
    while i < v.len() {
        let x = v[i];
        d = d.max(summary.empirical_cdf(x) - cdf(x));
        d = d.max(cdf(x.next_down()) - summary.empirical_cdf_left(x));
        while i < v.len() && v[i] == x {
            i += 1;
        }
    }
    d
}

/// Sup distance between the empirical CDF of integer-valued samples and a
/// reference CDF supported on the integers. Both are step functions with
/// jumps only at integers, so the supremum is attained on the integers in
/// `[min - 1, max]`.
pub fn ks_statistic_lattice<F: Fn(i64) -> f64>(summary: &SampleSummary, cdf: F) -> f64 {
    let lo = summary.sorted[0].floor() as i64 - 1;
    let hi = summary.sorted[summary.count - 1].ceil() as i64;
    let mut d: f64 = 0.0;
    for t in lo..=hi {
        d = d.max((summary.empirical_cdf(t as f64) - cdf(t)).abs());
    }
    d
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &SampleSummary, b: &SampleSummary) -> f64 {
    let (x, y) = (&a.sorted, &b.sorted);
    let (mut i, mut j) = (0, 0);
    let (m, n) = (x.len() as f64, y.len() as f64);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    d
}

/// `c(level) = sqrt(-ln(level / 2) / 2)`, the asymptotic Kolmogorov
/// quantile (1.628 at level 0.01).
pub fn kolmogorov_quantile(level: f64) -> Result<f64> {
    check_unit_open("level", level)?;
    Ok((-(level / 2.0).ln() / 2.0).sqrt())
}

/// One-sample critical value `c(level) / sqrt(m)`.
pub fn ks_critical_value(m: usize, level: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::EmptySample);
    }
    Ok(kolmogorov_quantile(level)? / (m as f64).sqrt())
}

/// Two-sample critical value `c(level) * sqrt((m + n) / (m n))`.
pub fn ks_two_sample_critical(m: usize, n: usize, level: f64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::EmptySample);
    }
    let (m, n) = (m as f64, n as f64);
    Ok(kolmogorov_quantile(level)? * ((m + n) / (m * n)).sqrt())
}

/// Two-sided standard normal quantile for a confidence level, e.g.
/// 2.5758 at 0.99.
pub fn normal_quantile(confidence: f64) -> Result<f64> {
    check_unit_open("confidence", confidence)?;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Domain("Wilson interval needs at least one trial".into()));
    }
    if successes > trials {
        return Err(Error::Domain(format!(
            "successes ({successes}) exceed trials ({trials})"
        )));
    }
    let z = normal_quantile(confidence)?;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    Ok((low, high))
}

/// Pearson chi-square goodness of fit after pooling cells.
#[derive(Clone, Debug, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub level: f64,
}

impl ChiSquareTest {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Minimum expected count per pooled cell.
pub const MIN_EXPECTED: f64 = 5.0;

/// Chi-square test of `observed` counts against cell probabilities `probs`.
///
/// Cells are pooled left to right until each pooled cell has expected count
/// at least [`MIN_EXPECTED`]; a short remainder is merged into the last
/// pooled cell. Any probability mass missing from `probs` (tails beyond the
/// listed cells) joins the final cell, so `observed` must cover the same
/// tail: callers put every out-of-range sample in the last cell.
pub fn chi_square_gof(observed: &[u64], probs: &[f64], level: f64) -> Result<ChiSquareTest> {
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(Error::Domain(
            "observed and probability vectors must match".into(),
        ));
    }
    check_unit_open("level", level)?;
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::EmptySample);
    }
    let n = total as f64;
    let missing = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    let last = probs.len() - 1;
    for (idx, (&o, &p)) in observed.iter().zip(probs).enumerate() {
        obs += o as f64;
        exp += n * p;
        if idx == last {
            exp += n * missing;
        }
        if exp >= MIN_EXPECTED {
            pooled.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match pooled.last_mut() {
            Some(cell) => {
                cell.0 += obs;
                cell.1 += exp;
            }
            None => pooled.push((obs, exp)),
        }
    }
    if pooled.len() < 2 {
        return Err(Error::Domain("fewer than two cells after pooling".into()));
    }
    let statistic = pooled.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = pooled.len() - 1;
    let critical = ChiSquared::new(dof as f64)
        .expect("positive dof")
        .inverse_cdf(1.0 - level);
    Ok(ChiSquareTest {
        statistic,
        dof,
        critical,
        level,
    })
}
