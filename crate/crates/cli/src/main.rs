use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use ringpert_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = match execute(&cli) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = exec.write_files(cli.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let text = if cli.machine {
        format!("{}\n", exec.report.to_json())
    } else {
        exec.human.clone()
    };
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        _ => {}
    }
    if exec.violation() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
