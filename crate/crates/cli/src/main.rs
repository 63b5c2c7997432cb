//! `pgevrey` command-line front-end.
//!
//! Exit status: 0 on success, 1 when an exact verification fails, 2 for
//! usage, input and domain errors, 3 for numerical breakdown. Nothing is
//! written to `--out` unless the command succeeds or only verification
//! fails.

mod args;
mod commands;
mod table;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: 2, message: format!("{}: {e}", path.display()) }
    }
}

impl From<pgevrey::Error> for Failure {
    fn from(e: pgevrey::Error) -> Self {
        let code = match e {
            pgevrey::Error::Numeric(_) => 3,
            pgevrey::Error::Verification(_) => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let (out, common) = match &cli.command {
        Command::Coeffs(a) => (commands::coeffs(a)?, &a.common),
        Command::Verify(a) => (commands::verify(a)?, &a.common),
        Command::Borel(a) => (commands::borel(a)?, &a.common),
        Command::Laplace(a) => (commands::laplace(a)?, &a.common),
        Command::Residual(a) => (commands::residual(a)?, &a.common),
        Command::Scan(a) => (commands::scan(a)?, &a.common),
    };
    match &common.out {
        Some(path) => fs::write(path, &out.text).map_err(|e| Failure::io(path, e))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::usage(format!("stdout: {e}")))?;
        }
    }
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
