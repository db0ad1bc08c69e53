//! CSV and JSON writers.
//!
//! Trace CSV columns are `t,action,reward,score_0..score_{N-1},q_0..q_{N-1}`.
//! The action column holds a task index, or `p_0|p_1|...` for a
//! distribution. Floats use Rust's shortest round-trip formatting, so the
//! same trace always produces the same bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::metrics::{aggregate, AggregateRow};
use crate::harness::session::{RunSummary, RunTrace};
use crate::teacher::TeacherAction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn join_floats(values: &[f64], sep: &str) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        write!(out, "{v}").expect("writing to a String");
    }
    out
}

pub fn write_trace_csv<W: Write>(trace: &RunTrace, mut w: W) -> io::Result<()> {
    let n = trace.num_tasks();
    let mut header = String::from("t,action,reward");
    (0..n).for_each(|i| write!(header, ",score_{i}").unwrap());
    (0..n).for_each(|i| write!(header, ",q_{i}").unwrap());
    writeln!(w, "{header}")?;
    for step in &trace.steps {
        let action = match &step.action {
            TeacherAction::SingleTask(task) => task.to_string(),
            TeacherAction::TaskDistribution(p) => join_floats(p, "|"),
        };
        writeln!(
            w,
            "{},{},{},{},{}",
            step.t,
            action,
            step.reward,
            join_floats(&step.scores, ","),
            join_floats(&step.q, ",")
        )?;
    }
    Ok(())
}

pub fn trace_csv_string(trace: &RunTrace) -> String {
    let mut buf = Vec::new();
    write_trace_csv(trace, &mut buf).expect("writing to a Vec");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

pub fn write_aggregate_csv<W: Write>(rows: &[AggregateRow], mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "label,runs,unmastered,median_steps,mean_steps,std_steps,mean_final_min,mean_final_scores"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.label,
            r.runs,
            r.unmastered,
            r.median_steps,
            r.mean_steps,
            r.std_steps,
            r.mean_final_min,
            join_floats(&r.mean_final_scores, "|")
        )?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn finish(path: &Path, w: io::BufWriter<fs::File>, res: io::Result<()>) -> Result<()> {
    res.and_then(|_| w.into_inner().map_err(|e| e.into_error()).map(drop))
        .map_err(|e| Error::io(path, e))
}

/// Write `trace_<seed>.csv` and `summary_<seed>.json` into `dir`.
pub fn write_run(trace: &RunTrace, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    ensure_dir(dir)?;
    let csv_path = dir.join(format!("trace_{}.csv", trace.seed));
    let mut w = create(&csv_path)?;
    let res = write_trace_csv(trace, &mut w);
    finish(&csv_path, w, res)?;

    let json_path = dir.join(format!("summary_{}.json", trace.seed));
    let mut w = create(&json_path)?;
    let res = serde_json::to_writer_pretty(&mut w, &trace.summary())
        .map_err(io::Error::from)
        .and_then(|_| writeln!(w));
    finish(&json_path, w, res)?;
    Ok((csv_path, json_path))
}

/// Write `aggregate.csv` or `aggregate.json` into `dir`.
pub fn write_aggregate(rows: &[AggregateRow], dir: &Path, format: Format) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(format!("aggregate.{}", format.extension()));
    let mut w = create(&path)?;
    let res = match format {
        Format::Csv => write_aggregate_csv(rows, &mut w),
        Format::Json => serde_json::to_writer_pretty(&mut w, rows)
            .map_err(io::Error::from)
            .and_then(|_| writeln!(w)),
    };
    finish(&path, w, res)?;
    Ok(path)
}

/// Anything `compare` accepts: a run summary, one aggregate row, or a list
/// of aggregate rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum Comparable {
    Rows(Vec<AggregateRow>),
    Row(AggregateRow),
    Run(RunSummary),
}

/// Load a summary or aggregate JSON file as aggregate rows.
pub fn load_rows(path: &Path) -> Result<Vec<AggregateRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parsed: Comparable = serde_json::from_str(&text)
        .map_err(|e| Error::config(format!("{}: not a summary or aggregate file: {e}", path.display())))?;
    Ok(match parsed {
        Comparable::Rows(rows) => rows,
        Comparable::Row(row) => vec![row],
        Comparable::Run(run) => vec![aggregate(&[run])],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metric: String,
    pub baseline_label: String,
    pub candidate_label: String,
    pub baseline: f64,
    pub candidate: f64,
    /// `(candidate - baseline) / |baseline|`; `None` when the baseline is 0.
    pub relative_change: Option<f64>,
}

/// Row-by-row relative change of `candidate` against `baseline`.
pub fn compare(baseline: &[AggregateRow], candidate: &[AggregateRow]) -> Result<Vec<Comparison>> {
    if baseline.len() != candidate.len() || baseline.is_empty() {
        return Err(Error::config(format!(
            "cannot compare {} rows with {} rows",
            baseline.len(),
            candidate.len()
        )));
    }
    let mut out = Vec::new();
    for (b, c) in baseline.iter().zip(candidate) {
        let metrics = [
            ("median_steps", b.median_steps, c.median_steps),
            ("mean_steps", b.mean_steps, c.mean_steps),
            ("mean_final_min", b.mean_final_min, c.mean_final_min),
        ];
        for (metric, bv, cv) in metrics {
            out.push(Comparison {
                metric: metric.to_string(),
                baseline_label: b.label.clone(),
                candidate_label: c.label.clone(),
                baseline: bv,
                candidate: cv,
                relative_change: (bv != 0.0).then(|| (cv - bv) / bv.abs()),
            });
        }
    }
    Ok(out)
}

pub fn write_comparison<W: Write>(rows: &[Comparison], format: Format, mut w: W) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)
        }
        Format::Csv => {
            writeln!(
                w,
                "metric,baseline_label,candidate_label,baseline,candidate,relative_change"
            )?;
            for r in rows {
                let rel = r.relative_change.map(|v| v.to_string()).unwrap_or_default();
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.metric, r.baseline_label, r.candidate_label, r.baseline, r.candidate, rel
                )?;
            }
            Ok(())
        }
    }
}
