use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qpencil_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &outcome.body),
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("qpencil: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code)
}
