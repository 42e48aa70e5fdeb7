use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use subgrowth::cli::Cli;
use subgrowth::commands::{run, Output};
use subgrowth::output::Format;
use subgrowth::{EXIT_BOUND_FAILED, EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = match &outcome.output {
                Output::Report(report) => {
                    if cli.global.format == Format::Csv {
                        for note in &report.notes {
                            eprintln!("note: {note}");
                        }
                    }
                    report.render(cli.global.format)
                }
                Output::Text(text) => text.clone(),
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(subgrowth::EXIT_COMPUTE);
            }
            if outcome.bound_failed {
                eprintln!("error: an exact bound check failed");
                ExitCode::from(EXIT_BOUND_FAILED)
            } else {
                ExitCode::from(EXIT_OK)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
