use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    match bifb::cli::run(bifb::cli::Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
