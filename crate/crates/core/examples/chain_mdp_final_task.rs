//! Training only on the longest corridor never sees a reward, while a
//! teacher that starts short transfers the learned Q-values along.
//!
//! ```sh
//! cargo run --release --example chain_mdp_final_task
//! ```

use tscl::harness::{sweep, ExperimentConfig};

fn main() -> tscl::Result<()> {
    let seeds: Vec<u64> = (0..10).collect();
    for teacher in [
        "teacher.algorithm = final_task_only",
        "teacher.algorithm = uniform",
        "teacher.algorithm = window\nteacher.policy = boltzmann",
    ] {
        let cfg: ExperimentConfig = format!("student.kind = chain_mdp\nmax_steps = 5000\n{teacher}").parse()?;
        let runs = sweep(&cfg, &seeds, true)?;
        let solved = runs.iter().filter(|r| r.final_scores.last() == Some(&1.0)).count();
        let steps: Vec<String> = runs
            .iter()
            .map(|r| r.steps_to_mastery.map_or("-".into(), |s| s.to_string()))
            .collect();
        println!(
            "{:<52} solved {solved}/10  episodes {}",
            teacher.replace('\n', ", "),
            steps.join(" ")
        );
    }
    Ok(())
}
