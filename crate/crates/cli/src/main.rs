//! `sfcov`: type graphs, state field coverage and test prioritization for a
//! Java source corpus.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Flags, RunConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "sfcov", version, about = "State field coverage of test oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the type graph of each root class
    Graph(Flags),
    /// Measure which coverable labels each oracle reaches
    Coverage(Flags),
    /// Order tests by covered labels and replay the orderings against a kill matrix
    Prioritize(Flags),
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Graph(f) => commands::cmd_graph(&RunConfig::from_flags(&f)?),
        Command::Coverage(f) => commands::cmd_coverage(&RunConfig::from_flags(&f)?),
        Command::Prioritize(f) => commands::cmd_prioritize(&RunConfig::from_flags(&f)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sfcov: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
