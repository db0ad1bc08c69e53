//! Sweep two configs, write aggregate files and compare them, the same
//! path the `tscl sweep` and `tscl compare` commands take.
//!
//! ```sh
//! cargo run --release --example sweep_compare -- /tmp/tscl-demo
//! ```

use std::path::PathBuf;

use tscl::harness::{compare, load_rows, sweep_all, write_aggregate, write_comparison, ExperimentConfig, Format};

fn main() -> tscl::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("tscl-sweep-compare"));

    let mut paths = Vec::new();
    for alg in ["uniform", "window"] {
        let cfg: ExperimentConfig = format!("label = {alg}\nteacher.algorithm = {alg}\nseeds = 0..10").parse()?;
        let rows = sweep_all(&[cfg], None, true)?;
        let dir = out.join(alg);
        std::fs::create_dir_all(&dir).map_err(|e| tscl::Error::io(&dir, e))?;
        paths.push(write_aggregate(&rows, &dir, Format::Json)?);
    }
    println!("wrote {} and {}", paths[0].display(), paths[1].display());

    let diff = compare(&load_rows(&paths[0])?, &load_rows(&paths[1])?)?;
    write_comparison(&diff, Format::Csv, std::io::stdout().lock()).map_err(|e| tscl::Error::io("<stdout>", e))?;
    Ok(())
}
