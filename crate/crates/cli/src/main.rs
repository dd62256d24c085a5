use std::process::ExitCode;

use clap::Parser;
use ewl_cli::{apply_precision_env, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match apply_precision_env().and_then(|_| execute(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ewl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
