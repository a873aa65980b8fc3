//! CSV and console output.
//!
//! Per-run CSV columns:
//! `stream,detector,seed,run,delay_mean,tp,fp,fn,accuracy,alarm_count`.
//! The aggregate CSV has `stream,detector,runs` followed by `_mean` and
//! `_std` columns for each metric. Accuracy is written in percent. Delay
//! and TP/FP/FN are left empty for streams without known drift positions.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mddm::eval::{AggregateRow, MeanStd};

use crate::error::{output_error, Result};
use crate::runner::RunRow;

pub const RUN_HEADER: [&str; 10] = [
    "stream",
    "detector",
    "seed",
    "run",
    "delay_mean",
    "tp",
    "fp",
    "fn",
    "accuracy",
    "alarm_count",
];

const METRICS: [&str; 6] = ["delay_mean", "tp", "fp", "fn", "accuracy", "alarm_count"];

fn fixed(x: f64) -> String {
    format!("{x:.4}")
}

fn run_record(row: &RunRow) -> Vec<String> {
    let s = &row.score;
    let has_drifts = !s.delays.is_empty();
    let count = |v: u64| if has_drifts { v.to_string() } else { String::new() };
    vec![
        row.stream.clone(),
        row.detector.clone(),
        row.seed.to_string(),
        row.run.to_string(),
        s.mean_delay().map(fixed).unwrap_or_default(),
        count(s.true_positives),
        count(s.false_positives),
        count(s.false_negatives),
        s.accuracy.map(|a| fixed(a * 100.0)).unwrap_or_default(),
        s.alarms.to_string(),
    ]
}

fn aggregate_header() -> Vec<String> {
    let mut header = vec!["stream".to_owned(), "detector".to_owned(), "runs".to_owned()];
    for m in METRICS {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_std"));
    }
    header
}

/// The metrics of a row in `METRICS` order, accuracy in percent.
fn metrics(row: &AggregateRow) -> [Option<MeanStd>; 6] {
    let has_drifts = row.delay.is_some();
    let when = |m: MeanStd| has_drifts.then_some(m);
    [
        row.delay,
        when(row.true_positives),
        when(row.false_positives),
        when(row.false_negatives),
        row.accuracy.map(|a| MeanStd {
            mean: a.mean * 100.0,
            std: a.std * 100.0,
        }),
        Some(row.alarms),
    ]
}

fn aggregate_record(row: &AggregateRow) -> Vec<String> {
    let mut out = vec![row.stream.clone(), row.detector.clone(), row.runs.to_string()];
    for m in metrics(row) {
        match m {
            Some(m) => {
                out.push(fixed(m.mean));
                out.push(fixed(m.std));
            }
            None => out.extend([String::new(), String::new()]),
        }
    }
    out
}

fn to_csv(header: Vec<String>, records: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for r in records {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn runs_csv(rows: &[RunRow]) -> String {
    to_csv(
        RUN_HEADER.iter().map(|s| s.to_string()).collect(),
        rows.iter().map(run_record),
    )
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    to_csv(aggregate_header(), rows.iter().map(aggregate_record))
}

/// `results.csv` -> `results_aggregate.csv`, next to it.
pub fn aggregate_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy()).unwrap_or("csv".into());
    out.with_file_name(format!("{stem}_aggregate.{ext}"))
}

/// Writes the per-run file and its aggregate sibling.
pub fn write_reports(out: &Path, rows: &[RunRow], aggregates: &[AggregateRow]) -> Result<()> {
    std::fs::write(out, runs_csv(rows)).map_err(output_error(out))?;
    let agg = aggregate_path(out);
    std::fs::write(&agg, aggregate_csv(aggregates)).map_err(output_error(&agg))?;
    Ok(())
}

/// Mean ± std table, one block per stream in first-seen order.
pub fn console_table(rows: &[AggregateRow]) -> String {
    let mut streams: Vec<&str> = Vec::new();
    for r in rows {
        if !streams.contains(&r.stream.as_str()) {
            streams.push(&r.stream);
        }
    }
    let headers = ["Detector", "Delay", "TP", "FP", "FN", "Accuracy", "Alarms"];
    let mut out = String::new();
    for stream in streams {
        let body: Vec<Vec<String>> = rows
            .iter()
            .filter(|r| r.stream == stream)
            .map(|r| {
                let mut cells = vec![r.detector.clone()];
                cells.extend(
                    metrics(r)
                        .iter()
                        .map(|m| m.map(|m| m.to_string()).unwrap_or_else(|| "-".into())),
                );
                cells
            })
            .collect();
        let widths: Vec<usize> = (0..headers.len())
            .map(|i| {
                body.iter()
                    .map(|row| row[i].chars().count())
                    .chain([headers[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_owned()
        };
        let _ = writeln!(out, "{stream}");
        let _ = writeln!(out, "{}", line(&headers.map(String::from)));
        for row in &body {
            let _ = writeln!(out, "{}", line(row));
        }
        out.push('\n');
    }
    out
}
