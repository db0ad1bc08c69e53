//! With forgetting switched up, a teacher that only chases positive
//! progress lets learned tasks decay. Ranking tasks by |Q| sends it back.
//!
//! ```sh
//! cargo run --release --example abs_ablation
//! ```

use tscl::harness::{aggregate, sweep, ExperimentConfig};

fn main() -> tscl::Result<()> {
    let seeds: Vec<u64> = (0..20).collect();
    println!("{:<8} {:>7} {:>8} {:>8}", "teacher", "forget", "|Q|", "Q");
    for forget in [0.001, 0.002, 0.005] {
        for alg in ["online", "window"] {
            let mut cols = Vec::new();
            for abs in [true, false] {
                let cfg: ExperimentConfig = format!(
                    "student.kind = chain\nstudent.n_tasks = 3\nstudent.forget_rate = {forget}\n\
                     max_steps = 5000\nteacher.algorithm = {alg}\nteacher.use_abs = {abs}"
                )
                .parse()?;
                cols.push(aggregate(&sweep(&cfg, &seeds, true)?).mean_final_min);
            }
            println!("{alg:<8} {forget:>7} {:>8.3} {:>8.3}", cols[0], cols[1]);
        }
    }
    Ok(())
}
