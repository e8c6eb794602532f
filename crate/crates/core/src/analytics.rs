//! Closed forms for extinction times, single-drop paths and first passages.
//!
//! Every power and product is evaluated in log space with `ln_1p`/`exp_m1`
//! so that quantities such as `(1 - c)^(n(n-1)/2)` stay accurate where
//! naive powering would underflow or cancel.

use serde::{Deserialize, Serialize};

use crate::error::{check_unit_open, Error, Result};

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::Domain("state k must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `P(tau_n <= t) = (1 - (1-c)^t)^n`.
pub fn extinction_cdf(n: u64, c: f64, t: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("extinction CDF needs n >= 1".into()));
    }
    check_unit_open("c", c)?;
    if t == 0 {
        return Ok(0.0);
    }
    let log_survive_one = (t as f64 * (-c).ln_1p()).exp();
    Ok((n as f64 * (-log_survive_one).ln_1p()).exp())
}

/// `E(tau_n) = sum_{t >= 0} (1 - (1 - (1-c)^t)^n)`.
pub fn extinction_time_mean(n: u64, c: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("extinction time needs n >= 1".into()));
    }
    check_unit_open("c", c)?;
    let log_q = (-c).ln_1p();
    let mut sum = 0.0;
    let mut t = 0u64;
    loop {
        let survive_one = (t as f64 * log_q).exp();
        let term = -(n as f64 * (-survive_one).ln_1p()).exp_m1();
        sum += term;
        // The remaining terms sum to at most n (1-c)^(t+1) / c.
        if n as f64 * survive_one / c < 1e-17 * sum {
            return Ok(sum);
        }
        t += 1;
    }
}

/// `d_n = -ln n / ln(1 - c)`, the scale with `tau_n / d_n -> 1`.
pub fn typical_extinction_time(n: u64, c: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("d_n is degenerate for n < 2".into()));
    }
    check_unit_open("c", c)?;
    Ok(-(n as f64).ln() / (-c).ln_1p())
}

/// `P(|tau_n / d_n - 1| > eps)`, read off the extinction CDF.
pub fn ratio_deviation_prob(n: u64, c: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let d = typical_extinction_time(n, c)?;
    let upper = ((1.0 + eps) * d).floor() as u64;
    let lower = ((1.0 - eps) * d).ceil() as u64;
    let below = if lower == 0 {
        0.0
    } else {
        extinction_cdf(n, c, lower - 1)?
    };
    Ok(1.0 - extinction_cdf(n, c, upper)? + below)
}

/// `ln P(A_k)`; see [`single_drop_prob`].
fn log_single_drop(k: u64, c: f64) -> f64 {
    if k == 1 {
        return 0.0;
    }
    let kf = k as f64;
    let log_q = (-c).ln_1p();
    kf.ln() + c.ln() + (kf - 1.0) * log_q - (-(kf * log_q).exp_m1()).ln()
}

/// Probability that the chain, on leaving `k`, lands exactly at `k - 1`:
/// `k (1-c)^(k-1) c / (1 - (1-c)^k)`.
pub fn single_drop_prob(k: u64, c: f64) -> Result<f64> {
    check_k(k)?;
    check_unit_open("c", c)?;
    Ok(log_single_drop(k, c).exp())
}

/// Probability that extinction from `n` happens through drops of exactly
/// one: the product of [`single_drop_prob`] over `k = 1..=n`, with the
/// mortality at each level supplied by `mortality_of_k`.
pub fn single_drop_path_prob<F>(n: u64, mut mortality_of_k: F) -> Result<f64>
where
    F: FnMut(u64) -> Result<f64>,
{
    let mut log_p = 0.0;
    for k in 1..=n {
        let c = mortality_of_k(k)?;
        check_unit_open("c_k", c)?;
        log_p += log_single_drop(k, c);
    }
    Ok(log_p.exp())
}

/// `(1 - c)^(n(n-1)/2)`, the lower bound on the single-drop path probability
/// for a mortality that does not depend on the current state.
pub fn path_prob_lower_bound_constant(n: u64, c: f64) -> Result<f64> {
    check_unit_open("c", c)?;
    if n <= 1 {
        return Ok(1.0);
    }
    let pairs = n as f64 * (n - 1) as f64 / 2.0;
    Ok((pairs * (-c).ln_1p()).exp())
}

/// `prod_{k=1}^n (1 - c_k)^(k-1)`.
pub fn path_prob_lower_bound_state<F>(n: u64, mut c_k: F) -> Result<f64>
where
    F: FnMut(u64) -> Result<f64>,
{
    let mut log_b = 0.0;
    for k in 2..=n {
        let c = c_k(k)?;
        check_unit_open("c_k", c)?;
        log_b += (k - 1) as f64 * (-c).ln_1p();
    }
    Ok(log_b.exp())
}

/// `(1 - n^(alpha - beta))^(n(n-1)/2)` for `c_{k,n} = k^alpha / n^beta`.
pub fn path_prob_lower_bound_joint(n: u64, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) || beta < alpha {
        return Err(Error::Domain(format!(
            "need 0 < alpha <= beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("joint bound needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(1.0);
    }
    let base = (n as f64).powf(alpha - beta);
    let pairs = n as f64 * (n - 1) as f64 / 2.0;
    Ok((pairs * (-base).ln_1p()).exp())
}

/// Defective pmf `P(T_k = j) = ((1-c)^k)^(j-1) k (1-c)^(k-1) c`.
pub fn passage_pmf(k: u64, c: f64, j: u64) -> Result<f64> {
    check_k(k)?;
    check_unit_open("c", c)?;
    if j == 0 {
        return Err(Error::Domain("passage time j must be at least 1".into()));
    }
    let kf = k as f64;
    let log_q = (-c).ln_1p();
    let log_p = (j - 1) as f64 * kf * log_q + kf.ln() + (kf - 1.0) * log_q + c.ln();
    Ok(log_p.exp())
}

/// Supremum of the admissible MGF arguments, `-k ln(1 - c)`.
pub fn passage_mgf_boundary(k: u64, c: f64) -> Result<f64> {
    check_k(k)?;
    check_unit_open("c", c)?;
    Ok(-(k as f64) * (-c).ln_1p())
}

/// `g_k(s) = E(exp(s T_k); T_k < inf) = k c (1-c)^(k-1) / (exp(-s) - (1-c)^k)`.
///
/// The series defining `g_k` converges only for `s < -k ln(1 - c)`; other
/// arguments are rejected. The denominator is evaluated as
/// `(1-c)^k expm1(-s - k ln(1-c))` to avoid cancellation near the boundary.
pub fn passage_mgf(k: u64, c: f64, s: f64) -> Result<f64> {
    let boundary = passage_mgf_boundary(k, c)?;
    if !(s < boundary) {
        return Err(Error::Domain(format!(
            "MGF argument s = {s} outside the convergence domain s < {boundary}"
        )));
    }
    let gap = (boundary - s).exp_m1();
    Ok(k as f64 * c / ((1.0 - c) * gap))
}

/// The two scaling families under which `T_{k,n} / a_n` has an exponential
/// limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalingLimit {
    /// `a_n c_n -> lambda`; the limit rate is `k lambda`.
    InitialScaled { lambda: f64 },
    /// `c_{k,n} ~ k^alpha / n^beta` with `a_n = n^beta`; the limit rate is
    /// `k^(alpha+1)`.
    JointPower { alpha: f64, beta: f64 },
}

/// Rate of the exponential limit of `T_{k,n} / a_n` on `{T_{k,n} < inf}`.
pub fn limit_passage_rate(limit: &ScalingLimit, k: u64) -> Result<f64> {
    check_k(k)?;
    match *limit {
        ScalingLimit::InitialScaled { lambda } => {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
            }
            Ok(k as f64 * lambda)
        }
        ScalingLimit::JointPower { alpha, beta } => {
            if !(alpha > 0.0 && beta >= alpha) {
                return Err(Error::Domain(format!(
                    "need 0 < alpha <= beta, got alpha = {alpha}, beta = {beta}"
                )));
            }
            Ok((k as f64).powf(alpha + 1.0))
        }
    }
}

/// Certified bracket for the expected implosion time `sum_k k^-(alpha+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaBracket {
    /// `sum_{k=1}^K k^-(alpha+1)`.
    pub partial_sum: f64,
    /// `K^-alpha / alpha >= sum_{k>K} k^-(alpha+1)`.
    pub tail_bound: f64,
}

impl ZetaBracket {
    pub fn contains(&self, x: f64) -> bool {
        self.partial_sum <= x && x <= self.partial_sum + self.tail_bound
    }
}

/// Partial sum of the expected level-passage times of the limiting chain
/// truncated at `K`, with the integral-comparison tail bound.
pub fn implosion_expected_time(alpha: f64, truncation: u64) -> Result<ZetaBracket> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "implosion needs alpha > 0 (the series diverges otherwise), got {alpha}"
        )));
    }
    if truncation == 0 {
        return Err(Error::Domain("truncation level K must be at least 1".into()));
    }
    Ok(ZetaBracket {
        partial_sum: power_sum(alpha + 1.0, truncation),
        tail_bound: (truncation as f64).powf(-alpha) / alpha,
    })
}

/// `sum_{k=1}^K k^-p`, summed from the smallest term up.
pub fn power_sum(p: f64, truncation: u64) -> f64 {
    (1..=truncation).rev().map(|k| (k as f64).powf(-p)).sum()
}
