use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use telegraph_core::cli::{run, Cli, EXIT_USAGE};

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("TELEGRAPH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("TELEGRAPH_THREADS must be a positive integer, got `{raw}`"))?;
    if n == 0 {
        return Err("TELEGRAPH_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("telegraph: {msg}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.text),
                None => std::io::stdout().write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("telegraph: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("telegraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
