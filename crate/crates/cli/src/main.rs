//! `iqa`: run inverse-annealing experiments from config files.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 config or usage error,
//! 3 numerical failure.
//!
//! Environment:
//! - `IQA_OUTPUT_DIR` overrides the config's `output_dir`.
//! - `IQA_WORKERS` caps the number of worker threads.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use iqa_core::experiments::{run, Cell, ExperimentConfig, RunOptions};
use iqa_core::Error;

#[derive(Debug, Parser)]
#[command(name = "iqa", version, about = "Inverse quantum annealing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Output {
    /// Directory receiving `<scenario>/<table>.csv`; overrides the config.
    #[arg(long, env = "IQA_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,

    /// Worker threads for independent runs.
    #[arg(long, env = "IQA_WORKERS")]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute the scenario described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Parse a config and print it with all defaults resolved.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare analytic and dense results for one chain length.
    Oracle {
        #[arg(long = "n")]
        n_sites: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::InvalidArgument(_) => 2,
        Error::Integration { .. } | Error::Degenerate { .. } | Error::Resource { .. } => 3,
        Error::Io { .. } | Error::Csv(_) => 1,
    }
}

/// Reads a config; an unreadable file counts as a config error.
fn load(path: &std::path::Path) -> Result<ExperimentConfig, Error> {
    ExperimentConfig::from_file(path).map_err(|e| match e {
        Error::Io { path, source } => Error::Config {
            key: "--config".into(),
            message: format!("cannot read {}: {source}", path.display()),
        },
        other => other,
    })
}

fn options(output: Output) -> RunOptions {
    RunOptions {
        workers: output.workers,
        output_dir: output.output_dir,
    }
}

fn execute(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<(), Error> {
    let out = run(cfg, opts)?;
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn oracle(n_sites: usize, opts: &RunOptions) -> Result<(), Error> {
    let cfg: ExperimentConfig = format!("scenario = oracle-check\nN_list = {n_sites}\n").parse()?;
    let out = run(&cfg, opts)?;
    let table = &out.tables[0];
    for col in ["max_abs_K_diff", "fidelity_diff"] {
        let worst = table
            .column(col)
            .unwrap_or_default()
            .iter()
            .filter_map(Cell::as_f64)
            .fold(0.0, f64::max);
        println!("{col}: {worst:.3e}");
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, output } => {
            load(&config).and_then(|cfg| execute(&cfg, &options(output)))
        }
        Command::Validate { config } => load(&config).map(|cfg| {
            print!("{}", cfg.render());
        }),
        Command::Oracle { n_sites, output } => oracle(n_sites, &options(output)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
