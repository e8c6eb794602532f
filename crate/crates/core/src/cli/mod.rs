//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! and configuration errors.

pub mod commands;
pub mod config;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use crate::regime::MortalityRegime;
use commands::CommandOutput;
use config::{
    parse_config, ExtinctConfig, ImplodeConfig, PassageConfig, PathConfig, SimulateConfig, VerifyConfig,
};

#[derive(Debug, Parser)]
#[command(name = "puredeath", version, about = "Pure death process experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for report and data files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads. Results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate trajectories; writes trajectories.csv and summary.json.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        /// `constant:0.3`, `joint-power:1:3`, ... or a JSON object.
        #[arg(long)]
        regime: Option<MortalityRegime>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        t_max: Option<u64>,
    },
    /// Extinction CDF: closed form, exact oracle and Monte Carlo.
    Extinct {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        c: Option<f64>,
        /// Must be a constant regime.
        #[arg(long, conflicts_with = "c")]
        regime: Option<MortalityRegime>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        t_max: Option<u64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Single-drop events, path probability and its lower bounds.
    Path {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        regime: Option<MortalityRegime>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Passage-time pmf, MGF and exponential limits.
    Passage {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        t_max: Option<u64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Truncation sweep of the imploding limit chain; writes sweep.csv and
    /// histogram.csv.
    Implode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: Option<f64>,
        /// Number of descents.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Every check at once; exit 0 iff all pass.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

/// A usage or configuration problem (exit code 2).
#[derive(Debug)]
struct UsageError(anyhow::Error);

fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, UsageError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(UsageError)?;
    parse_config(&text)
        .with_context(|| format!("config {}", path.display()))
        .map_err(UsageError)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run_command(command: Command) -> Result<(CommandOutput, Common), UsageError> {
    let usage = |e: crate::Error| UsageError(e.into());
    match command {
        Command::Simulate {
            common,
            n,
            regime,
            samples,
            t_max,
        } => {
            let mut cfg: SimulateConfig = load(common.config.as_deref())?;
            set(&mut cfg.n, n);
            set(&mut cfg.regime, regime);
            set(&mut cfg.samples, samples);
            set(&mut cfg.t_max, t_max.map(Some));
            set(&mut cfg.seed, common.seed);
            let workers = common.workers.unwrap_or_else(default_workers);
            Ok((commands::simulate(&cfg, workers).map_err(usage)?, common))
        }
        Command::Extinct {
            common,
            n,
            c,
            regime,
            samples,
            t_max,
            tolerance,
        } => {
            let mut cfg: ExtinctConfig = load(common.config.as_deref())?;
            let c = match regime {
                Some(MortalityRegime::Constant { c }) => Some(c),
                Some(other) => {
                    return Err(UsageError(anyhow::anyhow!(
                        "extinct needs a constant regime, got {other}"
                    )))
                }
                None => c,
            };
            set(&mut cfg.n, n);
            set(&mut cfg.c, c);
            set(&mut cfg.samples, samples);
            set(&mut cfg.t_max, t_max.map(Some));
            set(&mut cfg.tolerance, tolerance);
            set(&mut cfg.seed, common.seed);
            let workers = common.workers.unwrap_or_else(default_workers);
            Ok((commands::extinct(&cfg, workers).map_err(usage)?, common))
        }
        Command::Path {
            common,
            n,
            regime,
            samples,
            tolerance,
        } => {
            let mut cfg: PathConfig = load(common.config.as_deref())?;
            set(&mut cfg.n, n);
            set(&mut cfg.regime, regime);
            set(&mut cfg.samples, samples);
            set(&mut cfg.tolerance, tolerance);
            set(&mut cfg.seed, common.seed);
            let workers = common.workers.unwrap_or_else(default_workers);
            Ok((commands::path(&cfg, workers).map_err(usage)?, common))
        }
        Command::Passage {
            common,
            samples,
            t_max,
            tolerance,
        } => {
            let mut cfg: PassageConfig = load(common.config.as_deref())?;
            set(&mut cfg.samples, samples);
            set(&mut cfg.t_max, t_max.map(Some));
            set(&mut cfg.tolerance, tolerance);
            set(&mut cfg.seed, common.seed);
            let workers = common.workers.unwrap_or_else(default_workers);
            Ok((commands::passage(&cfg, workers).map_err(usage)?, common))
        }
        Command::Implode {
            common,
            alpha,
            samples,
        } => {
            let mut cfg: ImplodeConfig = load(common.config.as_deref())?;
            set(&mut cfg.alpha, alpha);
            set(&mut cfg.runs, samples);
            set(&mut cfg.seed, common.seed);
            let workers = common.workers.unwrap_or_else(default_workers);
            Ok((commands::implode(&cfg, workers).map_err(usage)?, common))
        }
        Command::Verify { common, tolerance } => {
            let mut cfg: VerifyConfig = load(common.config.as_deref())?;
            set(&mut cfg.tolerance, tolerance.map(Some));
            set(&mut cfg.seed, common.seed);
            let workers = common.workers.unwrap_or_else(default_workers);
            Ok((commands::verify(&cfg, workers).map_err(usage)?, common))
        }
    }
}

fn write_outputs(output: &CommandOutput, dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for file in &output.files {
        let path = dir.join(&file.name);
        std::fs::write(&path, &file.contents).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (output, common) = match run_command(cli.command) {
        Ok(v) => v,
        Err(UsageError(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(dir) = &common.out {
        if let Err(e) = write_outputs(&output, dir) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    let shown = match common.format {
        Format::Text => &output.text,
        Format::Json => &output.json,
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(shown.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(if output.pass { 0 } else { 1 })
}

pub fn main() -> ExitCode {
    run(std::env::args_os())
}
