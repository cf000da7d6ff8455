mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Cumulant(a) => commands::cumulant(a),
        Command::Verify(a) => commands::verify(a),
        Command::DieCheck(a) => commands::die_check(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
