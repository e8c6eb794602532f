//! Scaling limits of the passage times and the imploding limit chain.
//!
//! Two scaling families are realized. Under an initial-state mortality
//! `c_n -> 0` with `a_n = lambda / c_n` (so `a_n c_n = lambda` exactly, not
//! only in the limit), `T_{k,n} / a_n` on `{T_{k,n} < inf}` approaches an
//! exponential with rate `k lambda`. Under `c_{k,n} = k^alpha / n^beta` with
//! `a_n = n^beta` the limit rate is `k^(alpha+1)`.
//!
//! The limiting chain is modelled as a continuous-time pure death chain that
//! leaves level `k` after an independent `Exponential(k^(alpha+1))` time.
//! Started at a truncation level `K` its total time to reach 0 has mean
//! `sum_{k<=K} k^-(alpha+1)`, which stays bounded as `K` grows: the chain
//! comes down from infinity in finite expected time. Stage times are drawn
//! in increasing `k`, so the `K`-truncated totals of one run are nested
//! prefix sums and a truncation sweep shares its randomness across levels.

use serde::{Deserialize, Serialize};

use crate::analytics::{implosion_expected_time, power_sum, single_drop_prob, ScalingLimit};
use crate::error::{Error, Result};
use crate::parallel::MonteCarlo;
use crate::process::{default_t_max, passage_with_mortality, FirstPassageOutcome};
use crate::regime::MortalityRegime;
use crate::sampling::{exponential_unit, RngStream};
use crate::stats::{wilson_interval, SampleSummary};

/// A mortality family together with its time scale `a_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PassageFamily {
    /// `c_n = a n^-gamma`, `a_n = lambda / c_n`.
    InitialScaled { a: f64, gamma: f64, lambda: f64 },
    /// `c_{k,n} = k^alpha / n^beta`, `a_n = n^beta`.
    JointPower { alpha: f64, beta: f64 },
}

impl PassageFamily {
    pub fn regime(&self) -> Result<MortalityRegime> {
        match *self {
            PassageFamily::InitialScaled { a, gamma, lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
                }
                MortalityRegime::initial_power(a, gamma)
            }
            PassageFamily::JointPower { alpha, beta } => MortalityRegime::joint_power(alpha, beta),
        }
    }

    pub fn limit(&self) -> ScalingLimit {
        match *self {
            PassageFamily::InitialScaled { lambda, .. } => ScalingLimit::InitialScaled { lambda },
            PassageFamily::JointPower { alpha, beta } => ScalingLimit::JointPower { alpha, beta },
        }
    }

    /// The time scale `a_n`.
    pub fn scale(&self, n: u64) -> Result<f64> {
        match *self {
            PassageFamily::InitialScaled { lambda, .. } => {
                let c = self.regime()?.mortality(1, n.max(1))?;
                Ok(lambda / c)
            }
            PassageFamily::JointPower { beta, .. } => Ok((n as f64).powf(beta)),
        }
    }
}

/// Scaled passage times `T_{k,n} / a_n` from one batch.
#[derive(Clone, Debug, Serialize)]
pub struct ScaledPassageBatch {
    pub k: u64,
    pub n: u64,
    pub a_n: f64,
    /// Death probability in force at level `k`.
    pub mortality: f64,
    pub t_max: u64,
    pub trials: u64,
    pub finite: u64,
    pub censored: u64,
    pub finite_fraction: f64,
    /// Scaled finite passage times, in draw order.
    #[serde(skip)]
    pub scaled_times: Vec<f64>,
}

impl ScaledPassageBatch {
    pub fn summary(&self) -> Result<SampleSummary> {
        SampleSummary::from_values(self.scaled_times.clone())
    }
}

/// Draws `num_samples` passage outcomes at level `k` of the process started
/// from `n` and rescales the finite ones by `a_n`.
pub fn scaled_passage_batch(
    k: u64,
    n: u64,
    family: &PassageFamily,
    num_samples: usize,
    mc: &MonteCarlo,
    t_max: Option<u64>,
) -> Result<ScaledPassageBatch> {
    if num_samples == 0 {
        return Err(Error::EmptySample);
    }
    let regime = family.regime()?;
    let c = regime.mortality(k, n)?;
    let a_n = family.scale(n)?;
    let t_max = match t_max {
        Some(t) => t,
        None if c < 1.0 => default_t_max(c, k)?,
        None => 1,
    };
    let outcomes = mc.try_collect(num_samples, |rng| Ok(passage_with_mortality(k, c, rng, t_max)))?;
    let mut scaled_times = Vec::with_capacity(num_samples);
    let mut censored = 0u64;
    for outcome in &outcomes {
        match *outcome {
            FirstPassageOutcome::Finite { j } => scaled_times.push(j as f64 / a_n),
            FirstPassageOutcome::Censored { .. } => censored += 1,
            FirstPassageOutcome::JumpedOver => {}
        }
    }
    let finite = scaled_times.len() as u64;
    Ok(ScaledPassageBatch {
        k,
        n,
        a_n,
        mortality: c,
        t_max,
        trials: num_samples as u64,
        finite,
        censored,
        finite_fraction: finite as f64 / num_samples as f64,
        scaled_times,
    })
}

/// One point of the finite-passage probability sweep.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteFractionPoint {
    pub n: u64,
    pub mortality: f64,
    pub trials: u64,
    pub finite: u64,
    pub estimate: f64,
    /// Closed-form `P(A_k)` at this mortality.
    pub exact: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

impl FiniteFractionPoint {
    pub fn covers_exact(&self) -> bool {
        self.wilson_low <= self.exact && self.exact <= self.wilson_high
    }
}

/// Estimates `P(T_{k,n} < inf)` under `c_{k,n} = k^alpha / n^beta` along a
/// sweep of initial states.
pub fn finite_probability_trend(
    k: u64,
    alpha: f64,
    beta: f64,
    n_sweep: &[u64],
    samples: usize,
    mc: &MonteCarlo,
    confidence: f64,
) -> Result<Vec<FiniteFractionPoint>> {
    let family = PassageFamily::JointPower { alpha, beta };
    n_sweep
        .iter()
        .map(|&n| {
            let batch =
                scaled_passage_batch(k, n, &family, samples, &mc.labelled(&format!("trend-{n}")), None)?;
            let (wilson_low, wilson_high) = wilson_interval(batch.finite, batch.trials, confidence)?;
            let exact = if batch.mortality < 1.0 {
                single_drop_prob(k, batch.mortality)?
            } else {
                f64::from(u8::from(k == 1))
            };
            Ok(FiniteFractionPoint {
                n,
                mortality: batch.mortality,
                trials: batch.trials,
                finite: batch.finite,
                estimate: batch.finite_fraction,
                exact,
                wilson_low,
                wilson_high,
            })
        })
        .collect()
}

/// Total time for the limiting chain to come down from level `K` to 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImplosionRun {
    pub alpha: f64,
    pub truncation: u64,
    pub total_time: f64,
}

fn check_implosion(alpha: f64, truncation: u64) -> Result<()> {
    implosion_expected_time(alpha, truncation).map(|_| ())
}

/// `1 / k^(alpha+1)` for `k = 1..=K`.
fn stage_means(alpha: f64, truncation: u64) -> Vec<f64> {
    (1..=truncation)
        .map(|k| (k as f64).powf(-(alpha + 1.0)))
        .collect()
}

/// Level-passage times of one run; entry `k - 1` is the time spent at `k`.
pub fn implosion_stage_times(alpha: f64, truncation: u64, rng: &mut RngStream) -> Result<Vec<f64>> {
    check_implosion(alpha, truncation)?;
    Ok(stage_means(alpha, truncation)
        .into_iter()
        .map(|m| exponential_unit(rng) * m)
        .collect())
}

pub fn simulate_implosion(alpha: f64, truncation: u64, rng: &mut RngStream) -> Result<ImplosionRun> {
    let stages = implosion_stage_times(alpha, truncation, rng)?;
    Ok(ImplosionRun {
        alpha,
        truncation,
        total_time: stages.iter().sum(),
    })
}

/// One truncation level of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub truncation: u64,
    pub runs: u64,
    pub mean: f64,
    pub stderr: f64,
    pub variance: f64,
    pub variance_stderr: f64,
    /// `sum_{k<=K} k^-(alpha+1)`: the exact mean.
    pub partial_sum: f64,
    /// `K^-alpha / alpha`.
    pub tail_bound: f64,
    /// `sum_{k<=K} k^-2(alpha+1)`: the exact variance.
    pub exact_variance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplosionSweep {
    pub alpha: f64,
    pub rows: Vec<SweepRow>,
    /// Total times per truncation level (same order as `rows`), run order.
    #[serde(skip)]
    pub totals: Vec<Vec<f64>>,
}

/// Simulates `runs` descents from the largest level in `truncations` and
/// records the nested totals at every level of the sweep.
pub fn implosion_truncation_sweep(
    alpha: f64,
    truncations: &[u64],
    runs: usize,
    mc: &MonteCarlo,
) -> Result<ImplosionSweep> {
    if truncations.is_empty() || runs == 0 {
        return Err(Error::Domain("sweep needs at least one level and one run".into()));
    }
    if truncations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "truncation levels must be strictly increasing".into(),
        ));
    }
    let k_max = *truncations.last().unwrap();
    check_implosion(alpha, truncations[0])?;
    let means = stage_means(alpha, k_max);
    let per_run: Vec<Vec<f64>> = mc.try_collect(runs, |rng| {
        let mut totals = Vec::with_capacity(truncations.len());
        let mut acc = 0.0;
        let mut level = 0usize;
        for (idx, m) in means.iter().enumerate() {
            acc += exponential_unit(rng) * m;
            if idx as u64 + 1 == truncations[level] {
                totals.push(acc);
                level += 1;
            }
        }
        Ok(totals)
    })?;
    let mut totals: Vec<Vec<f64>> = vec![Vec::with_capacity(runs); truncations.len()];
    for run in &per_run {
        for (level, &t) in run.iter().enumerate() {
            totals[level].push(t);
        }
    }
    let rows = truncations
        .iter()
        .zip(&totals)
        .map(|(&truncation, values)| {
            let summary = SampleSummary::from_values(values.clone())?;
            let bracket = implosion_expected_time(alpha, truncation)?;
            Ok(SweepRow {
                truncation,
                runs: runs as u64,
                mean: summary.mean,
                stderr: summary.stderr,
                variance: summary.variance,
                variance_stderr: summary.variance_stderr(),
                partial_sum: bracket.partial_sum,
                tail_bound: bracket.tail_bound,
                exact_variance: power_sum(2.0 * (alpha + 1.0), truncation),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ImplosionSweep { alpha, rows, totals })
}
