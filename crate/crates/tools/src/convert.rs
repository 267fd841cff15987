//! Format conversion between CNF, WCNF and OPB

use std::{fmt, io::Write, path::Path, str::FromStr};

use satkit::{
    instances::{CardEncoding, EncodingConfig, InstanceError, ManageVars, PbEncoding},
    io::{self, dimacs, opb, Diagnostic, OpbOptions},
};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Cnf,
    Wcnf,
    Opb,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cnf" => Ok(Format::Cnf),
            "wcnf" => Ok(Format::Wcnf),
            "opb" => Ok(Format::Opb),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Format::Cnf => "cnf",
            Format::Wcnf => "wcnf",
            Format::Opb => "opb",
        };
        write!(f, "{name}")
    }
}

impl Format {
    /// Guesses the format from the file extension
    pub fn from_path(path: &Path) -> Option<Format> {
        path.extension()?.to_str()?.parse().ok()
    }
}

pub fn parse_card_encoding(s: &str) -> Result<CardEncoding, String> {
    match s {
        "totalizer" | "tot" => Ok(CardEncoding::Totalizer),
        "adder" => Ok(CardEncoding::Adder),
        _ => Err(format!("unknown cardinality encoding `{s}`")),
    }
}

pub fn parse_pb_encoding(s: &str) -> Result<PbEncoding, String> {
    match s {
        "gte" => Ok(PbEncoding::Gte),
        "adder" => Ok(PbEncoding::Adder),
        "dpw" => Ok(PbEncoding::Dpw),
        "card" => Ok(PbEncoding::CardSim),
        _ => Err(format!("unknown pseudo-Boolean encoding `{s}`")),
    }
}

#[derive(Error, Debug)]
pub enum ConvertError {
    #[error("conversion from {0} to {1} is not supported")]
    UnsupportedPair(Format, Format),
    #[error("the objective cannot be expressed in CNF")]
    Objective,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Encoding(#[from] InstanceError),
}

impl From<std::io::Error> for ConvertError {
    fn from(err: std::io::Error) -> Self {
        ConvertError::Io(err.into())
    }
}

/// Converts `input` in format `from` to format `to`. Same-format
/// conversions normalize and rewrite; OPB to CNF encodes all constraints.
/// Returns the parser warnings.
pub fn convert<W: Write>(
    input: &[u8],
    from: Format,
    to: Format,
    config: EncodingConfig,
    out: &mut W,
) -> Result<Vec<Diagnostic>, ConvertError> {
    let opts = OpbOptions::default();
    match (from, to) {
        (Format::Cnf, Format::Cnf) => {
            let parsed = dimacs::parse_cnf_bytes(input).map_err(io::Error::from)?;
            dimacs::write_cnf_instance(out, &parsed.value)?;
            Ok(parsed.warnings)
        }
        (Format::Wcnf, Format::Wcnf) => {
            let parsed = dimacs::parse_wcnf_bytes(input).map_err(io::Error::from)?;
            dimacs::write_wcnf(out, &parsed.value)?;
            Ok(parsed.warnings)
        }
        (Format::Opb, Format::Opb) => {
            let parsed = opb::parse_bytes(input, opts).map_err(io::Error::from)?;
            match &parsed.value {
                opb::OpbInstance::Sat(inst) => opb::write_sat(out, inst, opts)?,
                opb::OpbInstance::Opt(inst) => opb::write_opt(out, inst, opts)?,
            }
            Ok(parsed.warnings)
        }
        (Format::Opb, Format::Cnf) => {
            let parsed = opb::parse_bytes(input, opts).map_err(io::Error::from)?;
            let opb::OpbInstance::Sat(inst) = parsed.value else {
                return Err(ConvertError::Objective);
            };
            let (cnf, vm) = inst.into_cnf_with(config)?;
            dimacs::write_cnf(out, &cnf, vm.n_used())?;
            Ok(parsed.warnings)
        }
        (from, to) => Err(ConvertError::UnsupportedPair(from, to)),
    }
}
