use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use pvk_cli::commands::EXIT_INVALID;
use pvk_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID as u8),
            };
        }
    };
    let outcome = run(&cli);
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout(), "{}", render(&outcome.report, cli.format));
    ExitCode::from(outcome.exit_code as u8)
}
