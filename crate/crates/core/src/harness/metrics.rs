//! Trace checks and cross-seed statistics.

use serde::{Deserialize, Serialize};

use crate::harness::session::{RunSummary, RunTrace};
use crate::teacher::TeacherAction;

/// Tolerance of [`telescoping_check`].
pub const TELESCOPING_TOL: f64 = 1e-9;

/// Sum of the last observed score of every task, replayed from the trace.
pub fn final_observed_sum(trace: &RunTrace) -> f64 {
    let mut last = vec![0.0; trace.num_tasks()];
    for step in &trace.steps {
        match &step.action {
            TeacherAction::SingleTask(task) => last[task.index()] = step.scores[task.index()],
            TeacherAction::TaskDistribution(_) => last.copy_from_slice(&step.scores),
        }
    }
    last.iter().sum()
}

/// Whether the summed per-step rewards equal the summed final observed
/// scores. Every intermediate score cancels, so the teacher's return is
/// exactly the sum of each task's score at its last training step.
pub fn telescoping_check(trace: &RunTrace) -> bool {
    let rewards: f64 = trace.steps.iter().map(|s| s.reward).sum();
    (rewards - final_observed_sum(trace)).abs() <= TELESCOPING_TOL
}

/// Most frequently chosen task in each consecutive `bucket` steps of a
/// simple-formulation trace (ties go to the lower index).
pub fn modal_tasks(trace: &RunTrace, bucket: usize) -> Vec<usize> {
    let tasks: Vec<usize> = trace.chosen_tasks().map(|t| t.index()).collect();
    tasks
        .chunks(bucket)
        .map(|chunk| {
            let mut counts = vec![0usize; trace.num_tasks()];
            chunk.iter().for_each(|&t| counts[t] += 1);
            let best = counts.iter().copied().max().unwrap_or(0);
            counts.iter().position(|&c| c == best).unwrap_or(0)
        })
        .collect()
}

/// Cross-seed statistics of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub label: String,
    pub runs: usize,
    /// Runs that never reached mastery; they count as `max_steps` below.
    pub unmastered: usize,
    pub median_steps: f64,
    pub mean_steps: f64,
    pub std_steps: f64,
    pub mean_final_min: f64,
    pub mean_final_scores: Vec<f64>,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation.
pub fn std_dev(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Fold runs of one configuration, in the given order.
///
/// # Panics
/// If `runs` is empty.
pub fn aggregate(runs: &[RunSummary]) -> AggregateRow {
    assert!(!runs.is_empty(), "aggregate needs at least one run");
    let steps: Vec<f64> = runs
        .iter()
        .map(|r| r.steps_to_mastery.unwrap_or(r.max_steps) as f64)
        .collect();
    let n_tasks = runs[0].final_scores.len();
    let mean_final_scores = (0..n_tasks)
        .map(|i| mean(&runs.iter().map(|r| r.final_scores[i]).collect::<Vec<_>>()))
        .collect();
    AggregateRow {
        label: runs[0].label.clone(),
        runs: runs.len(),
        unmastered: runs.iter().filter(|r| r.steps_to_mastery.is_none()).count(),
        median_steps: median(&steps),
        mean_steps: mean(&steps),
        std_steps: std_dev(&steps),
        mean_final_min: mean(&runs.iter().map(RunSummary::final_min).collect::<Vec<_>>()),
        mean_final_scores,
    }
}
