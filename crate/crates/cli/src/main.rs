mod config;
mod eval;
mod norm_table;
mod tree;
mod verify;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig};

/// An error together with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const VERIFICATION: u8 = 1;
    pub const CONFIG: u8 = 2;

    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: Self::CONFIG,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<sphmult_core::Error> for Failure {
    fn from(e: sphmult_core::Error) -> Self {
        Self::config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::config(format!("i/o error: {e}"))
    }
}

/// Writes `text` to the configured file or to standard output.
pub fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::config(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = RunConfig::resolve(cli.command, cli.flags)?;
    match cfg.command {
        Command::NormTable => norm_table::run(&cfg),
        Command::Eval => eval::run(&cfg),
        Command::Verify => verify::run(&cfg),
        Command::Tree => tree::run(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
