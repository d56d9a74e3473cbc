use std::process::ExitCode;

use clap::Parser;

use mudgain_cli::{args::Cli, run, RunError};

fn main() -> ExitCode {
    // Flag-parse failures exit 2 through clap itself, matching the usage
    // errors detected further in.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(RunError::Runtime(error)) => {
            eprintln!("error: {error:#}");
            ExitCode::from(1)
        }
    }
}
