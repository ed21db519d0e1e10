//! Command-line front end for the `thmon` kernel: the element expression
//! language, run configuration and subcommand bodies.

pub mod commands;
pub mod expr;

pub use commands::{Output, RunConfig};
pub use expr::{parse_element, Env, Expr};

use thiserror::Error;

pub const MACHINE_HEADER: &str = "thmon-result v1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Kernel(#[from] thmon::Error),
    #[error("io error: {0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

/// Parses `"entries,dom,img"`.
pub fn parse_budget(s: &str) -> Result<thmon::green::OracleBudget, CliError> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("budget `{s}` is not three numbers")))?;
    match parts[..] {
        [e, d, i] => Ok(thmon::green::OracleBudget::new(e, d, i)?),
        _ => Err(CliError::Usage(format!("budget `{s}` is not three numbers"))),
    }
}

/// Splits a `name=expr` binding.
pub fn parse_def(s: &str) -> Result<(&str, &str), CliError> {
    s.split_once('=')
        .map(|(n, e)| (n.trim(), e.trim()))
        .ok_or_else(|| CliError::Usage(format!("binding `{s}` is not name=expr")))
}
