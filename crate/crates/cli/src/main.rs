use std::process::ExitCode;

use clap::Parser;
use rrtcut_cli::{args::Cli, run};

fn main() -> ExitCode {
    // clap exits with 2 on its own usage errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rrtcut: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
