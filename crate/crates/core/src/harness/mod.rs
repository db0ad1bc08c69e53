//! Seeded experiments: sessions, baselines, metrics and result files.

mod config;
mod metrics;
mod output;
mod session;
mod sweep;

pub use config::{parse_seeds, Baseline, ExperimentConfig, StudentConfig, TeacherChoice};
pub use metrics::{
    aggregate, final_observed_sum, mean, median, modal_tasks, std_dev, telescoping_check, AggregateRow, TELESCOPING_TOL,
};
pub use output::{
    compare, load_rows, trace_csv_string, write_aggregate, write_aggregate_csv, write_comparison, write_run,
    write_trace_csv, Comparison, Format,
};
pub use session::{build_student, run_session, run_with, RunSummary, RunTrace, Scheduler, StepRecord};
pub use sweep::{sweep, sweep_all};
