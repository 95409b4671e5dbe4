//! `orderlab` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check finds a
//! violation, 2 on usage or configuration errors.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;
use output::Outcome;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `orderlab --help` for usage");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let strategy = commands::configure_threads()?;
    match cli.command {
        Command::Verify(a) => commands::verify(&a, strategy),
        Command::Folner(a) => commands::folner(&a, strategy),
        Command::Entropy(a) => commands::entropy(&a, strategy),
        Command::Pairs(p) => commands::pairs(p, strategy),
    }
}
