//! Per-tier aggregate reports in CSV or markdown.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::taskgen::Tier;

use super::suite::EpisodeRecord;
use super::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown format {other:?} (expected csv or markdown)")),
        }
    }
}

/// One aggregate row. Score fields are fractions; formatting to percent
/// happens at emission.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub tier: String,
    pub episodes: usize,
    pub sr: f64,
    pub tsr: f64,
    pub cds: f64,
    pub rs: f64,
    pub crash_rate: f64,
    pub mean_task_time: f64,
    pub mean_safe_flight_distance: f64,
}

fn mean_row(label: &str, records: &[&EpisodeRecord]) -> ReportRow {
    let n = records.len() as f64;
    let sum = |f: &dyn Fn(&EpisodeRecord) -> f64| records.iter().map(|r| f(r)).sum::<f64>();
    ReportRow {
        tier: label.to_string(),
        episodes: records.len(),
        sr: sum(&|r| r.metrics.sr) / n,
        tsr: sum(&|r| r.metrics.tsr) / n,
        cds: sum(&|r| r.metrics.cds) / n,
        rs: sum(&|r| r.metrics.rs) / n,
        crash_rate: sum(&|r| if r.metrics.crash { 1.0 } else { 0.0 }) / n,
        mean_task_time: sum(&|r| r.metrics.task_time) / n,
        mean_safe_flight_distance: sum(&|r| r.metrics.safe_flight_distance) / n,
    }
}

/// Unweighted episode means per tier, tiers in ascending difficulty order,
/// followed by an Overall row across every episode.
pub fn aggregate_by_tier(records: &[EpisodeRecord]) -> Vec<ReportRow> {
    if records.is_empty() {
        return Vec::new();
    }
    let mut by_tier: BTreeMap<Tier, Vec<&EpisodeRecord>> = BTreeMap::new();
    for r in records {
        by_tier.entry(r.tier).or_default().push(r);
    }
    let mut rows: Vec<ReportRow> = by_tier
        .iter()
        .map(|(tier, group)| mean_row(tier.name(), group))
        .collect();
    let all: Vec<&EpisodeRecord> = records.iter().collect();
    rows.push(mean_row("Overall", &all));
    rows
}

fn pct(x: f64) -> String {
    format!("{:.2}", x * 100.0)
}

const COLUMNS: [&str; 8] = [
    "tier",
    "SR",
    "TSR",
    "CDS",
    "RS",
    "crash_rate",
    "mean_task_time",
    "mean_safe_flight_distance",
];

fn row_fields(row: &ReportRow) -> [String; 8] {
    [
        row.tier.clone(),
        pct(row.sr),
        pct(row.tsr),
        pct(row.cds),
        pct(row.rs),
        pct(row.crash_rate),
        format!("{:.2}", row.mean_task_time),
        format!("{:.2}", row.mean_safe_flight_distance),
    ]
}

pub fn render_csv(rows: &[ReportRow]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)
        .and_then(|_| rows.iter().try_for_each(|r| w.write_record(row_fields(r))))
        .map_err(|e| HarnessError::Log(format!("csv: {e}")))?;
    let bytes = w.into_inner().map_err(|e| HarnessError::Log(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Log(format!("csv: {e}")))
}

pub fn render_markdown(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
    out.push_str(&format!("|{}\n", " --- |".repeat(COLUMNS.len())));
    for row in rows {
        out.push_str(&format!("| {} |\n", row_fields(row).join(" | ")));
    }
    out
}

/// Aggregates and writes `report.csv` or `report.md` under `out_dir`.
pub fn emit_report(
    records: &[EpisodeRecord],
    format: ReportFormat,
    out_dir: &Path,
) -> Result<PathBuf, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::Config("no episode records to report".into()));
    }
    let rows = aggregate_by_tier(records);
    fs::create_dir_all(out_dir)?;
    let path = match format {
        ReportFormat::Csv => {
            let path = out_dir.join("report.csv");
            fs::write(&path, render_csv(&rows)?)?;
            path
        }
        ReportFormat::Markdown => {
            let path = out_dir.join("report.md");
            fs::write(&path, render_markdown(&rows))?;
            path
        }
    };
    Ok(path)
}
