use std::process::ExitCode;

use clap::Parser;
use clock_sweep::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("clock-sweep: {e}");
            ExitCode::FAILURE
        }
    }
}
