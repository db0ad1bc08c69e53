use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tscl::harness::{
    compare, load_rows, parse_seeds, run_session, sweep_all, write_aggregate, write_comparison, write_run,
    ExperimentConfig, Format,
};
use tscl::Error;

#[derive(Parser)]
#[command(name = "tscl", version, about = "Run teacher-student curriculum experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one session and write trace_<seed>.csv and summary_<seed>.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
    /// Run every config over a seed range and write one aggregate row per config.
    Sweep {
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        /// Seed range `A..B` (exclusive end) or comma list; defaults to each config's seeds.
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Run seeds one after another instead of in parallel.
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        quiet: bool,
    },
    /// Relative change of a candidate summary/aggregate JSON against a baseline.
    Compare {
        baseline: PathBuf,
        candidate: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            quiet,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let trace = run_session(&cfg, seed)?;
            fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let (trace_path, summary_path) = write_run(&trace, &out)?;
            if !quiet {
                let mastery = trace
                    .steps_to_mastery
                    .map_or_else(|| "not mastered".to_string(), |s| format!("mastered at step {s}"));
                println!("{} seed {seed}: {mastery}", trace.label);
                println!("wrote {} and {}", trace_path.display(), summary_path.display());
            }
        }
        Command::Sweep {
            config,
            seeds,
            out,
            format,
            serial,
            quiet,
        } => {
            let seeds = seeds
                .as_deref()
                .map(parse_seeds)
                .transpose()
                .map_err(|e| Failure::Usage(format!("--seeds: {e}")))?;
            let configs = config
                .iter()
                .map(ExperimentConfig::load)
                .collect::<tscl::Result<Vec<_>>>()?;
            let rows = sweep_all(&configs, seeds.as_deref(), !serial)?;
            fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let path = write_aggregate(&rows, &out, format.into())?;
            if !quiet {
                for r in &rows {
                    println!(
                        "{}: {} runs, median {} steps, {} unmastered",
                        r.label, r.runs, r.median_steps, r.unmastered
                    );
                }
                println!("wrote {}", path.display());
            }
        }
        Command::Compare {
            baseline,
            candidate,
            format,
            out,
        } => {
            let rows = compare(&load_rows(&baseline)?, &load_rows(&candidate)?)?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                    write_comparison(&rows, format.into(), io::BufWriter::new(file))
                        .map_err(|e| Error::io(&path, e))?;
                }
                None => {
                    let stdout = io::stdout();
                    write_comparison(&rows, format.into(), stdout.lock()).map_err(|e| Error::io("<stdout>", e))?;
                    io::stdout().flush().ok();
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
