//! A 4x4 grid where task (r, c) needs (r-1, c) and (r, c-1). Prints the
//! step at which each cell first scored above 0.9 under a batch Sampling
//! teacher, so the diagonal wavefront is visible.
//!
//! ```sh
//! cargo run --release --example grid2d_curriculum
//! ```

use tscl::harness::{run_session, ExperimentConfig};
use tscl::TaskId;

fn main() -> tscl::Result<()> {
    let cfg: ExperimentConfig =
        "student.kind = grid2d\nstudent.side = 4\nmax_steps = 40000\nteacher.algorithm = sampling\nteacher.formulation = batch"
            .parse()?;
    let trace = run_session(&cfg, 3)?;
    let side = 4;

    let mut first = vec![None; side * side];
    for step in &trace.steps {
        for (i, &s) in step.scores.iter().enumerate() {
            if s > 0.9 && first[i].is_none() {
                first[i] = Some(step.t);
            }
        }
    }

    println!("mastered at {:?}; step each cell passed 0.9:", trace.steps_to_mastery);
    for row in 0..side {
        let cells: Vec<String> = (0..side)
            .map(|col| match first[TaskId::from_grid(row, col, side).index()] {
                Some(t) => format!("{t:6}"),
                None => format!("{:>6}", "-"),
            })
            .collect();
        println!("{}", cells.join(" "));
    }
    Ok(())
}
