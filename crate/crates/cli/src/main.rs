use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hspatch_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
            let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("hspatch: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
