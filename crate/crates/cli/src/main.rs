//! `sheafwc`: generating functions, Betti tables, walls and consistency
//! checks from the command line.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid configuration,
//! 3 failed check.

mod cache;
mod check;
mod commands;
mod config;
mod format;

use std::ffi::OsString;
use std::fs;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, ConfigError};

/// Why a command did not produce its output.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Runtime(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

fn command_line(args: &[OsString]) -> String {
    args.iter()
        .skip(1)
        .map(|a| {
            let s = a.to_string_lossy();
            if s.contains(' ') {
                format!("{s:?}")
            } else {
                s.into_owned()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn emit(text: &str, path: Option<&std::path::Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Runtime(anyhow::anyhow!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli, line: String) -> Result<bool, Failure> {
    match &cli.command {
        Command::Series(a) => emit(&commands::series(a, line)?, a.out.output.as_deref()).map(|_| true),
        Command::Betti(a) => emit(&commands::betti(a, line)?, a.out.output.as_deref()).map(|_| true),
        Command::Walls(a) => emit(&commands::walls(a, line)?, a.out.output.as_deref()).map(|_| true),
        Command::Check(a) => {
            let hurwitz = cache::from_env(4 * 50).map_err(Failure::Runtime)?;
            let out = check::check(a, line, &hurwitz)?;
            emit(&out.text, None)?;
            Ok(out.all_passed)
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let cli = Cli::parse_from(&args);
    match run(&cli, command_line(&args)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
