//! `shuffletest`: simulate shuffles, test their output for uniformity and
//! emit reproducible reports with manifests.

mod args;
mod commands;
mod input;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit status for malformed input, flags or configuration.
const EXIT_VALIDATION: u8 = 2;
/// Exit status for I/O, numerical or diagnostic failures at run time.
const EXIT_RUNTIME: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<commands::UsageError>().is_some() {
            return EXIT_VALIDATION;
        }
        if let Some(err) = cause.downcast_ref::<shuffletest::Error>() {
            return if err.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_RUNTIME
            };
        }
    }
    EXIT_RUNTIME
}
