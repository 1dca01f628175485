//! Command-line front end: argument parsing, command dispatch and the
//! json-lines, csv and human output formats.

pub mod args;
pub mod commands;
pub mod output;

use std::io::Write;

use thiserror::Error;

pub use args::{Cli, Command, Format};
pub use commands::{execute, Outcome, Row};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::Io(_) => EXIT_DOMAIN,
            CliError::Unresolved(_) => EXIT_UNRESOLVED,
        }
    }
}

/// Runs a parsed command line, writing records to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let outcome = execute(&cli.command, cli.digits)?;
    output::write_rows(&outcome.rows, cli.format, out)?;
    if outcome.unresolved {
        return Ok(EXIT_UNRESOLVED);
    }
    if !outcome.rows.is_empty() && outcome.rows.iter().all(|r| r.failed) {
        return Ok(EXIT_DOMAIN);
    }
    Ok(EXIT_OK)
}
