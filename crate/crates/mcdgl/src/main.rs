use std::process::ExitCode;

use clap::Parser;
use mcdgl::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcomes = match mcdgl::run(&cli, &mut std::io::stdin()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = mcdgl::render(&outcomes, cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(mcdgl::exit_code(&outcomes) as u8)
}
