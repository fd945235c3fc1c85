mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Output, EXIT_CONFIG};
use config::{Flags, RunConfig};

/// Certifying inversion in ordered and seminormed nonassociative rings.
#[derive(Parser)]
#[command(name = "ogsr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ring, order and seminorm axiom suites.
    Axioms(Flags),
    /// Geometric-series inversion with a certificate.
    Invert(Flags),
    /// Interval-topology queries.
    Topology(Flags),
    /// Scripted scenarios.
    Suite(Flags),
}

type Handler = fn(&RunConfig) -> Result<Output, Failure>;

fn run(command: Command) -> Result<(Output, RunConfig), Failure> {
    let (flags, f): (Flags, Handler) = match command {
        Command::Axioms(flags) => (flags, commands::axioms),
        Command::Invert(flags) => (flags, commands::invert),
        Command::Topology(flags) => (flags, commands::topology),
        Command::Suite(flags) => (flags, commands::suite),
    };
    let cfg = RunConfig::resolve(flags).map_err(|message| Failure {
        code: EXIT_CONFIG,
        message,
    })?;
    Ok((f(&cfg)?, cfg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((output, cfg)) => {
            print!("{}", output.report);
            if let Some(path) = &cfg.report {
                if let Err(e) = std::fs::write(path, &output.report) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            }
            ExitCode::from(output.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
