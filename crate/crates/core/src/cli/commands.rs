//! The experiments behind each subcommand.
//!
//! Statistical rows inside one report share a family-wise confidence: with
//! `m` such rows each is checked at `1 - (1 - confidence) / m`.

use serde::Serialize;

use super::config::{
    config_hash, ExtinctConfig, ImplodeConfig, PassageConfig, PathConfig, SimulateConfig, VerifyConfig,
};
use crate::analytics::{
    extinction_cdf, extinction_time_mean, limit_passage_rate, passage_mgf, passage_mgf_boundary, passage_pmf,
    path_prob_lower_bound_constant, path_prob_lower_bound_joint, path_prob_lower_bound_state,
    ratio_deviation_prob, single_drop_path_prob, single_drop_prob, typical_extinction_time,
};
use crate::error::{Error, Result};
use crate::limits::{implosion_truncation_sweep, scaled_passage_batch, ImplosionSweep};
use crate::oracle::{
    exact_passage_law, exact_single_drop_path_prob, exact_state_history, mgf_by_summation, MAX_ORACLE_STATE,
    MAX_ORACLE_TIME,
};
use crate::parallel::MonteCarlo;
use crate::process::{
    default_t_max, extinction_time_sample, first_passage_sample, observe_single_drop_path,
    simulate_trajectory, Extinction, Trajectory,
};
use crate::regime::MortalityRegime;
use crate::report::{AnalyticReport, McEstimate, Provenance, ReportRow};
use crate::sampling::sample_max_geometric;
use crate::stats::{
    ks_critical_value, ks_statistic, ks_statistic_lattice, normal_quantile, wilson_interval, SampleSummary,
};

pub const TOOL: &str = "puredeath";

/// A named file produced by a command.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Everything a command produces.
#[derive(Clone, Debug)]
pub struct CommandOutput {
    pub json: String,
    pub text: String,
    pub pass: bool,
    pub files: Vec<OutputFile>,
}

pub fn provenance<T: Serialize>(command: &str, seed: u64, config: &T) -> Provenance {
    let (config_hash, config) = config_hash(config);
    Provenance {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        seed,
        config_hash,
        config,
    }
}

fn report_output(report: AnalyticReport, report_name: &str, mut files: Vec<OutputFile>) -> CommandOutput {
    let json = report.to_json();
    files.insert(
        0,
        OutputFile {
            name: report_name.into(),
            contents: json.clone(),
        },
    );
    CommandOutput {
        text: report.to_text(),
        pass: report.pass,
        json,
        files,
    }
}

fn per_row_confidence(confidence: f64, rows: usize) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    Ok(1.0 - (1.0 - confidence) / rows.max(1) as f64)
}

fn wilson(successes: u64, trials: u64, confidence: f64) -> Result<McEstimate> {
    let (low, high) = wilson_interval(successes, trials, confidence)?;
    Ok(McEstimate {
        estimate: successes as f64 / trials as f64,
        low,
        high,
    })
}

fn mean_interval(summary: &SampleSummary, half_width: f64) -> McEstimate {
    McEstimate {
        estimate: summary.mean,
        low: summary.mean - half_width,
        high: summary.mean + half_width,
    }
}

fn check_samples(name: &str, samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::Domain(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(tolerance >= 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be nonnegative, got {tolerance}"
        )));
    }
    Ok(())
}

fn csv_string<F>(write: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).map_err(|e| Error::Domain(format!("csv: {e}")))?;
    let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Censoring horizon for a run from `n`. Power-law regimes are monotone in
/// the state, so the smallest mortality sits at `k = 1` or `k = n`; tables
/// are scanned.
pub fn regime_t_max(regime: &MortalityRegime, n: u64) -> Result<u64> {
    let c_min = match regime {
        MortalityRegime::Table(table) => {
            let mut c_min: f64 = 1.0;
            for k in 1..=n.min(MAX_ORACLE_STATE.max(table.len() as u64)) {
                if let Ok(c) = regime.mortality(k, n) {
                    c_min = c_min.min(c);
                }
            }
            c_min
        }
        _ => regime.mortality(1, n)?.min(regime.mortality(n, n)?),
    };
    if c_min >= 1.0 {
        return Ok(1);
    }
    default_t_max(c_min, 1)
}

/// Summary written next to the trajectory CSV.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationSummary {
    pub provenance: Provenance,
    pub n: u64,
    pub samples: usize,
    pub t_max: u64,
    pub absorbed: u64,
    pub censored: u64,
    /// `None` for censored runs.
    pub extinction_times: Vec<Option<u64>>,
    pub mean_extinction_time: Option<f64>,
}

pub fn simulate(cfg: &SimulateConfig, workers: usize) -> Result<CommandOutput> {
    if cfg.n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_samples("samples", cfg.samples)?;
    cfg.regime.validate()?;
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => regime_t_max(&cfg.regime, cfg.n)?,
    };
    let mc = MonteCarlo::new(cfg.seed, workers).labelled("simulate");
    let runs: Vec<Trajectory> = mc.try_collect(cfg.samples, |rng| {
        simulate_trajectory(cfg.n, &cfg.regime, rng, t_max)
    })?;
    let csv = csv_string(|w| {
        w.write_record(["run_id", "t", "state"])?;
        for (run, traj) in runs.iter().enumerate() {
            for (t, state) in traj.states.iter().enumerate() {
                w.write_record([run.to_string(), t.to_string(), state.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    })?;
    let extinction_times: Vec<Option<u64>> = runs.iter().map(|r| r.extinction.time()).collect();
    let absorbed: Vec<u64> = extinction_times.iter().flatten().copied().collect();
    let summary = SimulationSummary {
        provenance: provenance("simulate", cfg.seed, cfg),
        n: cfg.n,
        samples: cfg.samples,
        t_max,
        absorbed: absorbed.len() as u64,
        censored: (runs.len() - absorbed.len()) as u64,
        mean_extinction_time: SampleSummary::from_counts(absorbed.iter().copied())
            .ok()
            .map(|s| s.mean),
        extinction_times,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary is plain data");
    json.push('\n');
    let text =
        format!(
        "# simulate n={} regime={} samples={} t_max={}\n# absorbed {} censored {} mean extinction time {}\n",
        cfg.n,
        cfg.regime,
        cfg.samples,
        t_max,
        summary.absorbed,
        summary.censored,
        summary.mean_extinction_time.map_or("-".into(), |m| format!("{m:.6}")),
    );
    Ok(CommandOutput {
        files: vec![
            OutputFile {
                name: "summary.json".into(),
                contents: json.clone(),
            },
            OutputFile {
                name: "trajectories.csv".into(),
                contents: csv,
            },
        ],
        json,
        text,
        pass: true,
    })
}

pub fn extinct_report(cfg: &ExtinctConfig, workers: usize) -> Result<AnalyticReport> {
    check_samples("samples", cfg.samples)?;
    check_samples("ratio_samples", cfg.ratio_samples)?;
    check_tolerance(cfg.tolerance)?;
    let regime = MortalityRegime::constant(cfg.c)?;
    extinction_cdf(cfg.n, cfg.c, 0)?;
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => default_t_max(cfg.c, 1)?,
    };
    let stat_rows = cfg.t_end as usize + 1 + 1 + 2;
    let conf = per_row_confidence(cfg.confidence, stat_rows)?;
    let mc = MonteCarlo::new(cfg.seed, workers);

    let oracle = if cfg.n <= MAX_ORACLE_STATE && cfg.t_end <= MAX_ORACLE_TIME {
        Some(exact_state_history(cfg.n, &regime, cfg.t_end)?)
    } else {
        None
    };
    let times: Vec<Extinction> = mc.labelled("extinct/cdf").try_collect(cfg.samples, |rng| {
        extinction_time_sample(cfg.n, &regime, rng, t_max)
    })?;
    let values: Vec<u64> = times
        .iter()
        .map(|e| e.time().unwrap_or(t_max.saturating_add(1)))
        .collect();
    let summary = SampleSummary::from_counts(values.iter().copied())?;

    let mut report = AnalyticReport::new(format!("extinction law, n = {}, c = {}", cfg.n, cfg.c));
    for t in 0..=cfg.t_end {
        let closed = extinction_cdf(cfg.n, cfg.c, t)?;
        let hits = values.iter().filter(|&&v| v <= t).count() as u64;
        let mc_row = wilson(hits, values.len() as u64, conf)?;
        let oracle_row = oracle.as_ref().map(|h| (h[t as usize].mass[0], cfg.tolerance));
        report.push(ReportRow::interval(
            format!("P(tau <= {t})"),
            closed,
            oracle_row,
            mc_row,
        ));
    }
    let d = ks_statistic_lattice(&summary, |t| {
        if t <= 0 {
            0.0
        } else {
            extinction_cdf(cfg.n, cfg.c, t as u64).unwrap_or(f64::NAN)
        }
    });
    report.push(ReportRow::statistic(
        "KS extinction times vs closed-form CDF",
        d,
        ks_critical_value(summary.count, 1.0 - conf)?,
    ));

    // The ratio tau_n / d_n for a large population, drawn by inversion.
    let dn = typical_extinction_time(cfg.ratio_n, cfg.ratio_c)?;
    let ratios: Vec<f64> = mc
        .labelled("extinct/ratio")
        .try_collect(cfg.ratio_samples, |rng| {
            Ok(sample_max_geometric(rng, cfg.ratio_n, cfg.ratio_c)? as f64 / dn)
        })?;
    let far = ratios.iter().filter(|r| (*r - 1.0).abs() > cfg.ratio_eps).count() as u64;
    report.push(ReportRow::interval(
        format!(
            "P(|tau/d_n - 1| > {}), n = {}, c = {}",
            cfg.ratio_eps, cfg.ratio_n, cfg.ratio_c
        ),
        ratio_deviation_prob(cfg.ratio_n, cfg.ratio_c, cfg.ratio_eps)?,
        None,
        wilson(far, ratios.len() as u64, conf)?,
    ));
    let ratio_summary = SampleSummary::from_values(ratios)?;
    let z = normal_quantile(conf)?;
    report.push(ReportRow::interval(
        format!("E(tau)/d_n, n = {}, c = {}", cfg.ratio_n, cfg.ratio_c),
        extinction_time_mean(cfg.ratio_n, cfg.ratio_c)? / dn,
        None,
        mean_interval(&ratio_summary, z * ratio_summary.stderr),
    ));
    Ok(report)
}

pub fn extinct(cfg: &ExtinctConfig, workers: usize) -> Result<CommandOutput> {
    let mut report = extinct_report(cfg, workers)?;
    report.provenance = Some(provenance("extinct", cfg.seed, cfg));
    Ok(report_output(report, "report.json", Vec::new()))
}

pub fn path_report(cfg: &PathConfig, workers: usize) -> Result<AnalyticReport> {
    if cfg.n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_samples("samples", cfg.samples)?;
    check_tolerance(cfg.tolerance)?;
    cfg.regime.validate()?;
    let n = cfg.n;
    let regime = &cfg.regime;
    let small = n <= MAX_ORACLE_STATE;
    let stat_rows = if small { n as usize } else { 0 } + 1;
    let conf = per_row_confidence(cfg.confidence, stat_rows)?;
    let mc = MonteCarlo::new(cfg.seed, workers);
    let mut report = AnalyticReport::new(format!("single-drop paths, n = {n}, regime {regime}"));

    if small {
        for k in 1..=n {
            let c = regime.mortality(k, n)?;
            let closed = single_drop_prob(k, c)?;
            let oracle = crate::process::drop_distribution(k, c)?[k as usize - 1];
            let hits = mc
                .labelled(&format!("path/A/{k}"))
                .try_count(cfg.samples, |rng| {
                    Ok(first_passage_sample(k, regime, rng, u64::MAX, n)?.is_finite())
                })?;
            report.push(ReportRow::interval(
                format!("P(A_{k})"),
                closed,
                Some((oracle, cfg.tolerance)),
                wilson(hits, cfg.samples as u64, conf)?,
            ));
        }
    }
    let exact = single_drop_path_prob(n, |k| regime.mortality(k, n))?;
    let oracle = if small {
        Some((exact_single_drop_path_prob(n, regime)?, cfg.tolerance))
    } else {
        None
    };
    let hits = mc
        .labelled("path/B")
        .try_count(cfg.samples, |rng| observe_single_drop_path(n, regime, rng))?;
    report.push(ReportRow::interval(
        format!("P(B_{n})"),
        exact,
        oracle,
        wilson(hits, cfg.samples as u64, conf)?,
    ));

    if regime.is_state_free() {
        let c = regime.mortality(n, n)?;
        report.push(ReportRow::bound(
            "constant-mortality bound <= P(B_n)",
            path_prob_lower_bound_constant(n, c)?,
            exact,
        ));
    }
    report.push(ReportRow::bound(
        "state-mortality bound <= P(B_n)",
        path_prob_lower_bound_state(n, |k| regime.mortality(k, n))?,
        exact,
    ));
    if let MortalityRegime::JointPower { alpha, beta } = *regime {
        report.push(ReportRow::bound(
            "joint-power bound <= P(B_n)",
            path_prob_lower_bound_joint(n, alpha, beta)?,
            exact,
        ));
    }

    let (alpha, beta) = (cfg.joint_alpha, cfg.joint_beta);
    let joint = MortalityRegime::joint_power(alpha, beta)?;
    let mut previous: Option<(u64, f64)> = None;
    for &m in &cfg.joint_sweep {
        let bound = path_prob_lower_bound_joint(m, alpha, beta)?;
        let exact = single_drop_path_prob(m, |k| joint.mortality(k, m))?;
        report.push(ReportRow::bound(
            format!("joint bound <= P(B_n), alpha = {alpha}, beta = {beta}, n = {m}"),
            bound,
            exact,
        ));
        if let Some((prev_n, prev)) = previous {
            report.push(ReportRow::bound(
                format!("joint bound increases from n = {prev_n} to n = {m}"),
                prev,
                bound,
            ));
        }
        previous = Some((m, bound));
    }
    if let Some((m, bound)) = previous {
        report.push(ReportRow::bound(
            format!("joint bound at n = {m} reaches 0.995"),
            0.995,
            bound,
        ));
    }
    Ok(report)
}

pub fn path(cfg: &PathConfig, workers: usize) -> Result<CommandOutput> {
    let mut report = path_report(cfg, workers)?;
    report.provenance = Some(provenance("path", cfg.seed, cfg));
    Ok(report_output(report, "report.json", Vec::new()))
}

pub fn passage_report(cfg: &PassageConfig, workers: usize) -> Result<AnalyticReport> {
    check_tolerance(cfg.tolerance)?;
    check_tolerance(cfg.edge_tolerance)?;
    let mut report = AnalyticReport::new("first passages");
    for &k in &cfg.k {
        for &c in &cfg.c {
            let law = exact_passage_law(k, c, cfg.pmf_terms)?;
            for j in 1..=cfg.pmf_terms {
                report.push(ReportRow::identity(
                    format!("P(T_{k} = {j}), c = {c}"),
                    passage_pmf(k, c, j)?,
                    law.pmf[j as usize - 1],
                    cfg.tolerance,
                ));
            }
            report.push(ReportRow::identity(
                format!("g_{k}(0) = P(A_{k}), c = {c}"),
                passage_mgf(k, c, 0.0)?,
                single_drop_prob(k, c)?,
                cfg.tolerance,
            ));
            let boundary = passage_mgf_boundary(k, c)?;
            for &frac in &cfg.s_fractions {
                let s = frac * boundary;
                let tol = if frac >= 0.99 {
                    cfg.edge_tolerance
                } else {
                    cfg.tolerance
                };
                report.push(ReportRow::identity(
                    format!("g_{k}(s) vs series, c = {c}, s = {frac} x boundary"),
                    passage_mgf(k, c, s)?,
                    mgf_by_summation(k, c, s, tol.max(f64::MIN_POSITIVE))?,
                    tol,
                ));
            }
        }
    }

    let stat_rows: usize = cfg.limits.iter().map(|e| 2 * e.k.len()).sum();
    let conf = per_row_confidence(cfg.confidence, stat_rows)?;
    let mc = MonteCarlo::new(cfg.seed, workers);
    for (idx, exp) in cfg.limits.iter().enumerate() {
        for &k in &exp.k {
            let batch = scaled_passage_batch(
                k,
                exp.n,
                &exp.family,
                cfg.samples,
                &mc.labelled(&format!("passage/limit/{idx}/{k}")),
                cfg.t_max,
            )?;
            let rate = limit_passage_rate(&exp.family.limit(), k)?;
            let family = serde_json::to_string(&exp.family).expect("families serialize");
            let summary = batch.summary()?;
            let d = ks_statistic(&summary, |x| -(-rate * x).exp_m1());
            report.push(ReportRow::statistic(
                format!("KS T_{k}/a_n vs Exp({rate}), n = {}, {family}", exp.n),
                d,
                ks_critical_value(summary.count, 1.0 - conf)?,
            ));
            report.push(ReportRow::interval(
                format!(
                    "P(T_{k} < inf), n = {}, c = {:e}, {family}",
                    exp.n, batch.mortality
                ),
                single_drop_prob(k, batch.mortality)?,
                None,
                wilson(batch.finite, batch.trials, conf)?,
            ));
        }
    }
    Ok(report)
}

pub fn passage(cfg: &PassageConfig, workers: usize) -> Result<CommandOutput> {
    let mut report = passage_report(cfg, workers)?;
    report.provenance = Some(provenance("passage", cfg.seed, cfg));
    Ok(report_output(report, "report.json", Vec::new()))
}

pub fn implode_report(cfg: &ImplodeConfig, workers: usize) -> Result<(AnalyticReport, ImplosionSweep)> {
    if !(cfg.sigmas > 0.0) {
        return Err(Error::Domain(format!(
            "sigmas must be positive, got {}",
            cfg.sigmas
        )));
    }
    let mc = MonteCarlo::new(cfg.seed, workers).labelled("implode");
    let sweep = implosion_truncation_sweep(cfg.alpha, &cfg.truncations, cfg.runs, &mc)?;
    let s = cfg.sigmas;
    let mut report = AnalyticReport::new(format!("implosion, alpha = {}", cfg.alpha));
    for row in &sweep.rows {
        let k = row.truncation;
        let mc_mean = McEstimate {
            estimate: row.mean,
            low: row.mean - s * row.stderr,
            high: row.mean + s * row.stderr,
        };
        report.push(ReportRow::interval(
            format!("mean total time, K = {k}"),
            row.partial_sum,
            None,
            mc_mean,
        ));
        let mc_var = McEstimate {
            estimate: row.variance,
            low: row.variance - s * row.variance_stderr,
            high: row.variance + s * row.variance_stderr,
        };
        report.push(ReportRow::interval(
            format!("variance of total time, K = {k}"),
            row.exact_variance,
            None,
            mc_var,
        ));
        report.push(ReportRow::bound(
            format!("mean total time, K = {k}, below the infinite-level mean"),
            row.mean - s * row.stderr,
            row.partial_sum + row.tail_bound,
        ));
    }
    for i in 1..sweep.rows.len() {
        let (lo, hi) = (&sweep.rows[i - 1], &sweep.rows[i]);
        let diffs: Vec<f64> = sweep.totals[i]
            .iter()
            .zip(&sweep.totals[i - 1])
            .map(|(b, a)| b - a)
            .collect();
        let diff = SampleSummary::from_values(diffs)?;
        let label = format!("K = {} -> {}", lo.truncation, hi.truncation);
        report.push(ReportRow::bound(
            format!("mean increment {label} within tail bound"),
            diff.mean,
            lo.tail_bound,
        ));
        report.push(ReportRow::interval(
            format!("mean increment {label}"),
            hi.partial_sum - lo.partial_sum,
            None,
            mean_interval(&diff, s * diff.stderr),
        ));
    }
    Ok((report, sweep))
}

pub fn implode(cfg: &ImplodeConfig, workers: usize) -> Result<CommandOutput> {
    if cfg.bins == 0 {
        return Err(Error::Domain("bins must be at least 1".into()));
    }
    let (mut report, sweep) = implode_report(cfg, workers)?;
    report.provenance = Some(provenance("implode", cfg.seed, cfg));
    let table = csv_string(|w| {
        w.write_record([
            "truncation",
            "runs",
            "mean",
            "stderr",
            "variance",
            "variance_stderr",
            "partial_sum",
            "tail_bound",
            "exact_variance",
        ])?;
        for r in &sweep.rows {
            w.write_record([
                r.truncation.to_string(),
                r.runs.to_string(),
                format!("{:e}", r.mean),
                format!("{:e}", r.stderr),
                format!("{:e}", r.variance),
                format!("{:e}", r.variance_stderr),
                format!("{:e}", r.partial_sum),
                format!("{:e}", r.tail_bound),
                format!("{:e}", r.exact_variance),
            ])?;
        }
        Ok(w.flush()?)
    })?;
    let totals = sweep.totals.last().expect("sweep has rows");
    let hist = csv_string(|w| {
        w.write_record(["truncation", "bin_low", "bin_high", "count", "density"])?;
        let truncation = sweep.rows.last().expect("sweep has rows").truncation.to_string();
        for (low, high, count, density) in histogram(totals, cfg.bins) {
            w.write_record([
                truncation.clone(),
                format!("{low:e}"),
                format!("{high:e}"),
                count.to_string(),
                format!("{density:e}"),
            ])?;
        }
        Ok(w.flush()?)
    })?;
    Ok(report_output(
        report,
        "report.json",
        vec![
            OutputFile {
                name: "sweep.csv".into(),
                contents: table,
            },
            OutputFile {
                name: "histogram.csv".into(),
                contents: hist,
            },
        ],
    ))
}

/// Equal-width bins over `[0, max]`: `(low, high, count, density)`.
pub fn histogram(values: &[f64], bins: usize) -> Vec<(f64, f64, u64, f64)> {
    let max = values.iter().copied().fold(0.0, f64::max);
    let width = if max > 0.0 { max / bins as f64 } else { 1.0 };
    let mut counts = vec![0u64; bins];
    for &v in values {
        let b = ((v / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total = values.len().max(1) as f64;
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let low = i as f64 * width;
            (low, low + width, count, count as f64 / (total * width))
        })
        .collect()
}

/// The configuration `verify` actually runs: the shared seed and tolerance
/// pushed into every section.
pub fn resolve_verify(cfg: &VerifyConfig) -> VerifyConfig {
    let mut c = cfg.clone();
    c.extinct.seed = cfg.seed;
    c.path.seed = cfg.seed;
    c.passage.seed = cfg.seed;
    c.implode.seed = cfg.seed;
    if let Some(tol) = cfg.tolerance {
        c.extinct.tolerance = tol;
        c.path.tolerance = tol;
        c.passage.tolerance = tol;
        c.passage.edge_tolerance = tol;
    }
    c
}

/// Runs every section and merges the rows into one report.
pub fn verify_report(cfg: &VerifyConfig, workers: usize) -> Result<AnalyticReport> {
    let c = resolve_verify(cfg);
    let mut report = AnalyticReport::new("verification suite");
    report.extend(extinct_report(&c.extinct, workers)?);
    report.extend(path_report(&c.path, workers)?);
    report.extend(passage_report(&c.passage, workers)?);
    report.extend(implode_report(&c.implode, workers)?.0);
    report.provenance = Some(provenance("verify", c.seed, &c));
    Ok(report)
}

pub fn verify(cfg: &VerifyConfig, workers: usize) -> Result<CommandOutput> {
    Ok(report_output(
        verify_report(cfg, workers)?,
        "report.json",
        Vec::new(),
    ))
}
