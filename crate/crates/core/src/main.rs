use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use fibrae::cli::{exit_code, run, Cli, Workspace};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ws = Workspace::new();
    for path in &cli.inputs {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        } else {
            std::fs::read_to_string(path)
        };
        let text = match text {
            Ok(t) => t,
            Err(e) => {
                eprintln!("fibrae: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        };
        if let Err(e) = ws.load(&text) {
            eprintln!("fibrae: {}:{e}", path.display());
            return ExitCode::from(exit_code(&e) as u8);
        }
    }
    match run(&cli.command, &ws, cli.list) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fibrae: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
