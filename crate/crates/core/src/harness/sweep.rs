use rayon::prelude::*;

use crate::error::Result;
use crate::harness::config::ExperimentConfig;
use crate::harness::metrics::{aggregate, AggregateRow};
use crate::harness::session::{run_session, RunSummary};

/// Run `cfg` once per seed. Results come back in seed order whether or not
/// the runs execute in parallel; each run draws only from its own seed.
pub fn sweep(cfg: &ExperimentConfig, seeds: &[u64], parallel: bool) -> Result<Vec<RunSummary>> {
    let run = |&seed: &u64| run_session(cfg, seed).map(|trace| trace.summary());
    if parallel {
        seeds.par_iter().map(run).collect()
    } else {
        seeds.iter().map(run).collect()
    }
}

/// One aggregate row per config, in the order given.
pub fn sweep_all(configs: &[ExperimentConfig], seeds: Option<&[u64]>, parallel: bool) -> Result<Vec<AggregateRow>> {
    configs
        .iter()
        .map(|cfg| {
            let seeds = seeds.unwrap_or(&cfg.seeds);
            sweep(cfg, seeds, parallel).map(|runs| aggregate(&runs))
        })
        .collect()
}
