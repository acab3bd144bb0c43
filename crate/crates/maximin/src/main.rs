use std::process::ExitCode;

use clap::Parser;
use maximin::cli::{run, Cli, Failure};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Violation(msg) => eprintln!("violation: {msg}"),
            }
            failure.exit_code()
        }
    }
}
