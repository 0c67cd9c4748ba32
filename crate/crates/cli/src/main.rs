use std::io::Write;
use std::process::ExitCode;

use carpet_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if !out.text.is_empty() {
                let _ = write!(stdout, "{}", out.text);
                if !out.text.ends_with('\n') {
                    let _ = writeln!(stdout);
                }
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
