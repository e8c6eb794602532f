//! The `puredeath` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_puredeath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn simulate_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for (dir, workers) in [(&a, "1"), (&b, "3")] {
        let out = run(&[
            "simulate",
            "--n",
            "5",
            "--regime",
            "constant:0.5",
            "--samples",
            "3",
            "--seed",
            "1",
            "--workers",
            workers,
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let csv = read(&a, "trajectories.csv");
    assert_eq!(csv, read(&b, "trajectories.csv"));
    assert_eq!(read(&a, "summary.json"), read(&b, "summary.json"));
    assert!(csv.starts_with("run_id,t,state\n"));
    let runs: std::collections::BTreeSet<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(runs.into_iter().collect::<Vec<_>>(), ["0", "1", "2"]);
    let summary: serde_json::Value = serde_json::from_str(&read(&a, "summary.json")).unwrap();
    assert_eq!(summary["provenance"]["seed"], 1);
    assert_eq!(summary["provenance"]["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(summary["extinction_times"].as_array().unwrap().len(), 3);
}

#[test]
fn invalid_regime_json_names_the_field() {
    let out = run(&["simulate", "--regime", r#"{"type": "constant", "rate": 0.3}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("rate"), "{}", stderr(&out));
}

#[test]
fn config_file_rejects_unknown_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"n": 4, "regime": {"type": "constant", "c": 0.3}, "smaples": 2}"#,
    )
    .unwrap();
    let out = run(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("smaples"), "{}", stderr(&out));

    std::fs::write(
        &path,
        r#"{"n": 4, "regime": {"type": "constant", "c": 0.3}, "samples": 2}"#,
    )
    .unwrap();
    let out = run(&["simulate", "--config", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["samples"], 2);
    assert_eq!(summary["n"], 4);
}

#[test]
fn zero_population_is_rejected() {
    let out = run(&["simulate", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n must be at least 1"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["simulate", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn extinct_report_has_zero_row_at_t0() {
    let out = run(&["extinct", "--samples", "5000", "--format", "json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &report["rows"][0];
    assert_eq!(row["label"], "P(tau <= 0)");
    assert_eq!(row["closed_form"], 0.0);
    assert_eq!(row["oracle"], 0.0);
    assert_eq!(row["monte_carlo"]["estimate"], 0.0);
    assert_eq!(report["pass"], true);
}

#[test]
fn extinct_rejects_state_dependent_regime() {
    let out = run(&["extinct", "--regime", "state-power:0.5:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn path_for_single_individual_is_certain() {
    let out = run(&["path", "--n", "1", "--samples", "1000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in report["rows"].as_array().unwrap() {
        if row["label"].as_str().unwrap().starts_with("P(") {
            assert_eq!(row["closed_form"], 1.0);
            assert_eq!(row["oracle"], 1.0);
            assert_eq!(row["monte_carlo"]["estimate"], 1.0);
        }
    }
}

#[test]
fn tiny_tolerance_fails_verification() {
    let out = run(&["verify", "--tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn verify_output_independent_of_workers() {
    let one = run(&["verify", "--seed", "3", "--workers", "1", "--format", "json"]);
    let four = run(&["verify", "--seed", "3", "--workers", "4", "--format", "json"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let report: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(report["provenance"]["command"], "verify");
    assert_eq!(report["provenance"]["config"]["extinct"]["seed"], 3);
}

#[test]
fn implode_writes_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("implode.json");
    std::fs::write(&cfg, r#"{"truncations": [10, 100], "runs": 4000, "bins": 20}"#).unwrap();
    let out = run(&[
        "implode",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let sweep = read(tmp.path(), "sweep.csv");
    assert!(sweep.starts_with(
        "truncation,runs,mean,stderr,variance,variance_stderr,partial_sum,tail_bound,exact_variance\n"
    ));
    assert_eq!(sweep.lines().count(), 3);
    let hist = read(tmp.path(), "histogram.csv");
    assert_eq!(hist.lines().count(), 21);
    let total: u64 = hist
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 4000);
    assert!(tmp.path().join("report.json").exists());
}
