//! Report rows, aggregates and their CSV/JSON forms.
//!
//! CSV columns, in order: `query, start_row, start_col, goal_row, goal_col,
//! algorithm, w, outcome, cost, sipp_cost, cost_ratio, runtime_s,
//! runtime_ratio, expansions, reexpansions, generated`. Missing values are
//! empty. The summary goes to `<stem>.summary.csv` next to the report with
//! columns `algorithm, w, solved, timeouts, failures, mean_cost_ratio,
//! mean_runtime_ratio, mean_runtime_s, mean_expansions, mean_reexpansions,
//! mean_generated`. JSON reports hold `{rows, summary, unsolvable}`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sipp_core::Algorithm;

use crate::experiment::ReportFormat;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub query: usize,
    pub start: (i32, i32),
    pub goal: (i32, i32),
    #[serde(with = "algorithm_name")]
    pub algorithm: Algorithm,
    pub w: f64,
    pub outcome: String,
    pub cost: Option<f64>,
    pub sipp_cost: f64,
    pub cost_ratio: Option<f64>,
    pub runtime_s: f64,
    /// Median runtime over the SIPP baseline's; only for found plans.
    pub runtime_ratio: Option<f64>,
    pub expansions: u64,
    pub reexpansions: u64,
    pub generated: u64,
}

/// A query whose SIPP baseline found no plan; its variants are skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Unsolvable {
    pub query: usize,
    pub start: (i32, i32),
    pub goal: (i32, i32),
    pub reason: String,
}

/// Means over the found rows of one (algorithm, w).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(with = "algorithm_name")]
    pub algorithm: Algorithm,
    pub w: f64,
    pub solved: usize,
    pub timeouts: usize,
    pub failures: usize,
    pub mean_cost_ratio: Option<f64>,
    pub mean_runtime_ratio: Option<f64>,
    pub mean_runtime_s: Option<f64>,
    pub mean_expansions: Option<f64>,
    pub mean_reexpansions: Option<f64>,
    pub mean_generated: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub rows: Vec<Row>,
    pub unsolvable: Vec<Unsolvable>,
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    rows: Vec<Row>,
    summary: Vec<SummaryRow>,
    unsolvable: Vec<Unsolvable>,
}

mod algorithm_name {
    use serde::{Deserialize, Deserializer, Serializer};
    use sipp_core::Algorithm;

    pub fn serialize<S: Serializer>(a: &Algorithm, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(a.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Algorithm, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub const CSV_COLUMNS: [&str; 16] = [
    "query",
    "start_row",
    "start_col",
    "goal_row",
    "goal_col",
    "algorithm",
    "w",
    "outcome",
    "cost",
    "sipp_cost",
    "cost_ratio",
    "runtime_s",
    "runtime_ratio",
    "expansions",
    "reexpansions",
    "generated",
];

pub const SUMMARY_COLUMNS: [&str; 11] = [
    "algorithm",
    "w",
    "solved",
    "timeouts",
    "failures",
    "mean_cost_ratio",
    "mean_runtime_ratio",
    "mean_runtime_s",
    "mean_expansions",
    "mean_reexpansions",
    "mean_generated",
];

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunReport {
    /// Rows by (query, algorithm, w).
    pub fn sort(&mut self) {
        self.rows
            .sort_by(|a, b| (a.query, a.algorithm).cmp(&(b.query, b.algorithm)).then(a.w.total_cmp(&b.w)));
        self.unsolvable.sort_by_key(|u| u.query);
    }

    /// One entry per (algorithm, w) in row order. Timeouts and failures are
    /// counted but excluded from the means.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut keys: Vec<(Algorithm, f64)> = Vec::new();
        for r in &self.rows {
            if !keys.iter().any(|&(a, w)| a == r.algorithm && w == r.w) {
                keys.push((r.algorithm, r.w));
            }
        }
        keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        keys.into_iter()
            .map(|(algorithm, w)| {
                let group: Vec<&Row> = self.rows.iter().filter(|r| r.algorithm == algorithm && r.w == w).collect();
                let found: Vec<&Row> = group.iter().copied().filter(|r| r.outcome == "found").collect();
                SummaryRow {
                    algorithm,
                    w,
                    solved: found.len(),
                    timeouts: group.iter().filter(|r| r.outcome == "timeout").count(),
                    failures: group.iter().filter(|r| r.outcome == "failure").count(),
                    mean_cost_ratio: mean(found.iter().filter_map(|r| r.cost_ratio)),
                    mean_runtime_ratio: mean(found.iter().filter_map(|r| r.runtime_ratio)),
                    mean_runtime_s: mean(found.iter().map(|r| r.runtime_s)),
                    mean_expansions: mean(found.iter().map(|r| r.expansions as f64)),
                    mean_reexpansions: mean(found.iter().map(|r| r.reexpansions as f64)),
                    mean_generated: mean(found.iter().map(|r| r.generated as f64)),
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = JsonReport {
            rows: self.rows.clone(),
            summary: self.summary(),
            unsolvable: self.unsolvable.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<RunReport> {
        let doc: JsonReport = serde_json::from_str(text)?;
        Ok(RunReport {
            rows: doc.rows,
            unsolvable: doc.unsolvable,
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.write_record([
                r.query.to_string(),
                r.start.0.to_string(),
                r.start.1.to_string(),
                r.goal.0.to_string(),
                r.goal.1.to_string(),
                r.algorithm.name().to_string(),
                r.w.to_string(),
                r.outcome.clone(),
                opt(r.cost),
                r.sipp_cost.to_string(),
                opt(r.cost_ratio),
                r.runtime_s.to_string(),
                opt(r.runtime_ratio),
                r.expansions.to_string(),
                r.reexpansions.to_string(),
                r.generated.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SUMMARY_COLUMNS)?;
        for s in self.summary() {
            w.write_record([
                s.algorithm.name().to_string(),
                s.w.to_string(),
                s.solved.to_string(),
                s.timeouts.to_string(),
                s.failures.to_string(),
                opt(s.mean_cost_ratio),
                opt(s.mean_runtime_ratio),
                opt(s.mean_runtime_s),
                opt(s.mean_expansions),
                opt(s.mean_reexpansions),
                opt(s.mean_generated),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    path.with_file_name(format!("{stem}.summary.csv"))
}

/// Writes the report to `path`; CSV reports also get a summary file next to
/// them (see [`summary_path`]). Returns the files written.
pub fn emit_report(report: &RunReport, format: ReportFormat, path: &Path) -> Result<Vec<PathBuf>> {
    let create = |p: &Path| File::create(p).map(BufWriter::new).with_context(|| format!("creating {}", p.display()));
    match format {
        ReportFormat::Csv => {
            report.write_csv(create(path)?)?;
            let summary = summary_path(path);
            report.write_summary_csv(create(&summary)?)?;
            Ok(vec![path.to_path_buf(), summary])
        }
        ReportFormat::Json => {
            let mut out = create(path)?;
            out.write_all(report.to_json()?.as_bytes())?;
            out.flush()?;
            Ok(vec![path.to_path_buf()])
        }
    }
}

pub fn read_json_report(path: &Path) -> Result<RunReport> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunReport::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}
