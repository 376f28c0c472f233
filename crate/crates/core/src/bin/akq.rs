use std::process::ExitCode;

use clap::Parser;

use akq_core::cli::{execute, Cli};

fn main() -> ExitCode {
    let config = Cli::parse().into_config();
    match execute(&config) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("akq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
