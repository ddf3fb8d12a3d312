// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the reproduction runs.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qdatabus::experiments::{self, ExperimentConfig, ExperimentKind, OutputFormat};
use qdatabus::Error;

#[derive(Debug, Parser)]
#[command(
    name = "qdatabus",
    version,
    about = "Quantum data bus experiments on a ring of coupled oscillators"
)]
struct Cli {
    /// transfer | compare-approx | wstate | scaling | disorder | node-parity
    experiment: String,
    /// JSON experiment configuration (unknown keys are rejected)
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Overrides the configuration seed
    #[arg(long)]
    seed: Option<u64>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
}

fn exit_code(err: &Error) -> u8 {
    if err.is_config() {
        2
    } else if err.is_numerical() {
        3
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let kind: ExperimentKind = cli.experiment.parse()?;
    let format: OutputFormat = cli.format.parse()?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", cli.config.display())))?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        config.seed = Some(seed);
    }
    let result = experiments::run(kind, &config)?;
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    for path in result.write(&cli.out, format)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
