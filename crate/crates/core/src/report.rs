//! Check-by-check reports pairing closed forms with oracles and Monte Carlo
//! estimates.

use std::fmt::Write as _;

use serde::Serialize;

/// How a row decides `pass`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|closed_form - oracle| <= tolerance`.
    Identity,
    /// Closed form lies in the Monte Carlo interval (and agrees with the
    /// oracle when one is present).
    Interval,
    /// Monte Carlo statistic at or below the critical value in `closed_form`.
    Statistic,
    /// `closed_form <= oracle`, the oracle being the quantity bounded.
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub kind: CheckKind,
    pub closed_form: f64,
    pub oracle: Option<f64>,
    pub monte_carlo: Option<McEstimate>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl ReportRow {
    pub fn identity(label: impl Into<String>, closed_form: f64, oracle: f64, tolerance: f64) -> Self {
        ReportRow {
            label: label.into(),
            kind: CheckKind::Identity,
            closed_form,
            oracle: Some(oracle),
            monte_carlo: None,
            tolerance: Some(tolerance),
            pass: (closed_form - oracle).abs() <= tolerance,
        }
    }

    /// `oracle` is `Some((value, tolerance))` when an exact second route exists.
    pub fn interval(
        label: impl Into<String>,
        closed_form: f64,
        oracle: Option<(f64, f64)>,
        mc: McEstimate,
    ) -> Self {
        let oracle_ok = oracle.is_none_or(|(o, tol)| (closed_form - o).abs() <= tol);
        ReportRow {
            label: label.into(),
            kind: CheckKind::Interval,
            closed_form,
            oracle: oracle.map(|o| o.0),
            monte_carlo: Some(mc),
            tolerance: oracle.map(|o| o.1),
            pass: oracle_ok && mc.low <= closed_form && closed_form <= mc.high,
        }
    }

    pub fn statistic(label: impl Into<String>, statistic: f64, critical: f64) -> Self {
        ReportRow {
            label: label.into(),
            kind: CheckKind::Statistic,
            closed_form: critical,
            oracle: None,
            monte_carlo: Some(McEstimate {
                estimate: statistic,
                low: 0.0,
                high: critical,
            }),
            tolerance: None,
            pass: statistic <= critical,
        }
    }

    pub fn bound(label: impl Into<String>, bound: f64, bounded: f64) -> Self {
        ReportRow {
            label: label.into(),
            kind: CheckKind::Bound,
            closed_form: bound,
            oracle: Some(bounded),
            monte_carlo: None,
            tolerance: None,
            pass: bound <= bounded,
        }
    }
}

/// Where a report came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// SHA-256 of the canonical JSON of `config`.
    pub config_hash: String,
    pub config: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticReport {
    pub title: String,
    pub provenance: Option<Provenance>,
    pub rows: Vec<ReportRow>,
    pub pass: bool,
}

impl AnalyticReport {
    pub fn new(title: impl Into<String>) -> Self {
        AnalyticReport {
            title: title.into(),
            provenance: None,
            rows: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.pass &= row.pass;
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: AnalyticReport) {
        for row in other.rows {
            self.push(row);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is plain data");
        s.push('\n');
        s
    }

    /// Aligned columns: label, kind, closed form, oracle, Monte Carlo
    /// estimate with its interval, verdict.
    pub fn to_text(&self) -> String {
        let num = |v: f64| format!("{v:.10e}");
        let header = [
            "check",
            "kind",
            "closed_form",
            "oracle",
            "monte_carlo",
            "interval",
            "pass",
        ];
        let mut table: Vec<[String; 7]> = vec![header.map(String::from)];
        for r in &self.rows {
            let (mc, interval) = match r.monte_carlo {
                Some(m) => (num(m.estimate), format!("[{}, {}]", num(m.low), num(m.high))),
                None => ("-".into(), "-".into()),
            };
            table.push([
                r.label.clone(),
                format!("{:?}", r.kind).to_lowercase(),
                num(r.closed_form),
                r.oracle.map_or("-".into(), num),
                mc,
                interval,
                if r.pass { "PASS" } else { "FAIL" }.into(),
            ]);
        }
        let mut widths = [0usize; 7];
        for row in &table {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        if let Some(p) = &self.provenance {
            let _ = writeln!(
                out,
                "# {} {} {} seed={} config={}",
                p.tool, p.version, p.command, p.seed, p.config_hash
            );
        }
        for row in &table {
            let line: Vec<String> = row
                .iter()
                .zip(widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "# {} of {} checks passed: {}",
            self.rows.len() - failed,
            self.rows.len(),
            if self.pass { "PASS" } else { "FAIL" }
        );
        out
    }
}
