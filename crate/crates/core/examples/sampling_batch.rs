//! Batch-formulation teachers against uniform sampling on the chain student.
//!
//! ```sh
//! cargo run --release --example sampling_batch
//! ```

use tscl::harness::{sweep_all, ExperimentConfig};

fn main() -> tscl::Result<()> {
    let configs = ["uniform", "online", "naive", "window", "sampling"]
        .iter()
        .map(|alg| {
            format!("label = {alg}\nteacher.algorithm = {alg}\nteacher.formulation = batch\nseeds = 0..20").parse()
        })
        .collect::<tscl::Result<Vec<ExperimentConfig>>>()?;

    let rows = sweep_all(&configs, None, true)?;
    let uniform = rows[0].median_steps;
    println!("{:<10} {:>8} {:>8} {:>10}", "teacher", "median", "mean", "vs uniform");
    for r in &rows {
        println!(
            "{:<10} {:>8} {:>8.0} {:>9.2}x",
            r.label,
            r.median_steps,
            r.mean_steps,
            r.median_steps / uniform
        );
    }
    Ok(())
}
