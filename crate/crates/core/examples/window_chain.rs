//! Watch a Window teacher walk up the chain: the task it trains most moves
//! from the easy end to the hard end as each prerequisite is learned.
//!
//! ```sh
//! cargo run --example window_chain -- 7
//! ```

use tscl::harness::{modal_tasks, run_session, ExperimentConfig};
use tscl::TeacherAction;

fn main() -> tscl::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    // A slow learner stretches the curriculum over several buckets.
    let cfg: ExperimentConfig =
        "student.kind = chain\nstudent.learn_rate = 0.01\nmax_steps = 4000\nteacher.algorithm = window".parse()?;
    let trace = run_session(&cfg, seed)?;

    println!("seed {seed}: mastered at {:?}", trace.steps_to_mastery);
    println!("most trained task per 500 steps: {:?}", modal_tasks(&trace, 500));

    let n = trace.num_tasks();
    for chunk in trace.steps.chunks(500) {
        let mut counts = vec![0usize; n];
        for step in chunk {
            if let TeacherAction::SingleTask(task) = step.action {
                counts[task.index()] += 1;
            }
        }
        let last = chunk.last().unwrap();
        let bars: Vec<String> = counts.iter().map(|&c| format!("{:<10}", "#".repeat(c / 50))).collect();
        println!("t<={:6} |{}| scores {:.2?}", last.t, bars.join("|"), last.scores);
    }
    Ok(())
}
