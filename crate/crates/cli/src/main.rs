mod args;
mod commands;
mod config;
mod context;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run() -> Result<(), CliError> {
    let raw = config::expand(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(raw) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    match &cli.command {
        Command::Gen(a) => commands::gen::run(a),
        Command::Explain(a) => commands::explain::run(a),
        Command::Cover(a) => commands::cover::run(a),
        Command::Mclist(a) => commands::mclist::run(a),
        Command::Eval(a) => commands::eval::run(a),
        Command::Verify(a) => commands::verify::run(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lgx: {}", e.to_string().trim_end());
            ExitCode::from(e.exit_code())
        }
    }
}
