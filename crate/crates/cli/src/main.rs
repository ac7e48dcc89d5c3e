use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use opcalc_cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let invocation = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(&cli, &invocation) {
        Ok(out) => {
            if !out.output.is_empty() {
                // A closed pipe (`| head`) is not an error worth reporting.
                let _ = writeln!(std::io::stdout().lock(), "{}", out.output);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
