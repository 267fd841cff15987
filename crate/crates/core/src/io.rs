//! # Parsers and Writers
//!
//! DIMACS CNF, WCNF (current and legacy format) and OPB. Parsers read the
//! whole input and report failures as [`ParseError`]s carrying a 1-based
//! line number. Recoverable oddities, such as header counts disagreeing
//! with the content, are returned as warnings alongside the result.

use std::fmt;

use thiserror::Error;

pub mod dimacs;
pub mod opb;

pub use opb::OpbOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

/// A message tied to a position in the input
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line number
    pub line: usize,
    /// 1-based byte column, 0 if the message concerns the whole line
    pub col: usize,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    pub(crate) fn warning(line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            col,
            message: message.into(),
            severity: Severity::Warning,
        }
    }

    pub(crate) fn error(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError(Diagnostic {
            line,
            col,
            message: message.into(),
            severity: Severity::Error,
        })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{kind}: line {}, column {}: {}", self.line, self.col, self.message)
    }
}

/// A fatal parse failure
#[derive(Error, Clone, Debug, PartialEq, Eq)]
#[error("{0}")]
pub struct ParseError(pub Diagnostic);

impl ParseError {
    pub fn line(&self) -> usize {
        self.0.line
    }
}

/// A parse result with the warnings raised while parsing
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<Diagnostic>,
}

/// Errors from reading or writing instance files
#[derive(Error, Debug)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the file contains an objective")]
    UnexpectedObjective,
    #[error("cannot write instance: {0}")]
    Unsupported(&'static str),
}

/// A whitespace separated token with its 1-based column
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub col: usize,
}

/// Splits input into lines, skipping comment lines (first non-blank byte
/// is `comment`) and rejecting non-ASCII bytes elsewhere
pub(crate) fn lines(bytes: &[u8], comment: u8) -> Result<Vec<(usize, &str)>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let first = raw.iter().position(|b| !b.is_ascii_whitespace());
        let Some(first) = first else { continue };
        if raw[first] == comment {
            continue;
        }
        if let Some(col) = raw.iter().position(|b| !b.is_ascii()) {
            return Err(Diagnostic::error(line_no, col + 1, "non-ASCII byte"));
        }
        // checked ASCII above
        let text = std::str::from_utf8(raw).unwrap();
        out.push((line_no, text));
    }
    Ok(out)
}

pub(crate) fn tokens(line: &str) -> impl Iterator<Item = Token<'_>> {
    let bytes = line.as_bytes();
    let mut pos = 0;
    std::iter::from_fn(move || {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            return None;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        Some(Token {
            text: &line[start..pos],
            col: start + 1,
        })
    })
}
