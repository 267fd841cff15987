//! Checking an assignment against a CNF

use std::fmt;

use satkit::{
    instances::SatInstance,
    types::{Assignment, Lit, TernaryVal},
};
use thiserror::Error;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum AssignmentError {
    #[error("invalid literal `{0}`")]
    InvalidLiteral(String),
    #[error("assignment is not terminated by 0")]
    Unterminated,
    #[error("variable {0} is assigned both values")]
    Conflicting(u32),
}

/// A parsed assignment plus the literals it mentions outside the instance
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedAssignment {
    pub assignment: Assignment,
    pub ignored: Vec<i32>,
}

/// Reads `v` lines or bare IPASIR integers up to the first `0`. Lines
/// starting with `c` or `s` are skipped. Literals over variables beyond
/// `n_vars` are collected in [`ParsedAssignment::ignored`].
pub fn parse_assignment(text: &str, n_vars: u32) -> Result<ParsedAssignment, AssignmentError> {
    let mut out = ParsedAssignment::default();
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let val: i32 = tok.parse().map_err(|_| AssignmentError::InvalidLiteral(tok.to_string()))?;
            if val == 0 {
                return Ok(out);
            }
            let lit = Lit::from_ipasir(val).map_err(|_| AssignmentError::InvalidLiteral(tok.to_string()))?;
            if lit.var().idx32() >= n_vars {
                out.ignored.push(val);
                continue;
            }
            if out.assignment.lit_value(lit) == TernaryVal::False {
                return Err(AssignmentError::Conflicting(lit.var().idx32() + 1));
            }
            out.assignment.assign_lit(lit);
        }
    }
    Err(AssignmentError::Unterminated)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// 1-based index of the first clause with all literals false
    Falsified(usize),
    /// 1-based index of the first clause that is neither satisfied nor
    /// falsified, reported only if no clause is falsified
    Incomplete(usize),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => write!(f, "OK"),
            Verdict::Falsified(idx) => write!(f, "FALSIFIED at clause {idx}"),
            Verdict::Incomplete(idx) => write!(f, "INCOMPLETE at clause {idx}"),
        }
    }
}

pub fn verify(inst: &SatInstance, assign: &Assignment) -> Verdict {
    let mut incomplete = None;
    for (idx, cl) in inst.cnf().iter().enumerate() {
        match cl.evaluate(assign) {
            TernaryVal::True => {}
            TernaryVal::False => return Verdict::Falsified(idx + 1),
            TernaryVal::DontCare => {
                incomplete.get_or_insert(idx + 1);
            }
        }
    }
    match incomplete {
        Some(idx) => Verdict::Incomplete(idx),
        None => Verdict::Ok,
    }
}
