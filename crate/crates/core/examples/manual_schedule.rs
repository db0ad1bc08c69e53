//! A hand-written curriculum: fixed step counts per task, then uniform.
//!
//! ```sh
//! cargo run --example manual_schedule
//! ```

use tscl::harness::{run_session, ExperimentConfig};

fn main() -> tscl::Result<()> {
    let cfg: ExperimentConfig = "label = by-hand
teacher.algorithm = manual
teacher.schedule = 0:60,1:80,2:100,3:120,4:150
max_steps = 3000"
        .parse()?;
    print!("{cfg}");

    let trace = run_session(&cfg, 1)?;
    for t in [60, 140, 240, 360, 510] {
        let step = &trace.steps[t - 1];
        println!("after step {t:4}: scores {:.2?}", step.scores);
    }
    println!("mastered at {:?}", trace.steps_to_mastery);
    Ok(())
}
