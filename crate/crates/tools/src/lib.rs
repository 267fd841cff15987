//! Library side of the `satkit` command line tools. Each subcommand is a
//! plain function here so it can be tested without spawning processes.

pub mod convert;
pub mod count;
pub mod enumerate;
pub mod verify;

use std::{path::PathBuf, str::FromStr};

/// Solver backend selected on the command line
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverChoice {
    Reference,
    Binary(PathBuf),
}

impl FromStr for SolverChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ref" {
            return Ok(SolverChoice::Reference);
        }
        match s.strip_prefix("bin:") {
            Some(path) if !path.is_empty() => Ok(SolverChoice::Binary(path.into())),
            _ => Err(format!("unknown solver `{s}`, expected `ref` or `bin:<path>`")),
        }
    }
}

/// Parses `lo..hi` (inclusive on both ends)
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a range `lo..hi`, found `{s}`"))?;
    let lo: usize = lo.trim().parse().map_err(|_| format!("invalid range start `{lo}`"))?;
    let hi: usize = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| format!("invalid range end `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}
