use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use irlab_cli::commands::{execute, writes_to_file, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) if writes_to_file(&cli) => std::fs::write(path, &out.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        _ => std::io::stdout()
            .write_all(out.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(out.status)
}
