//! DIMACS CNF and WCNF

use std::io::{Read, Write};

use crate::{
    instances::{Cnf, ManageVars, Objective, OptInstance, SatInstance},
    types::{Clause, Lit, Var},
};

use super::{lines, tokens, Diagnostic, Error, ParseError, Parsed, Token};

fn parse_lit(tok: &Token, line: usize) -> Result<Option<Lit>, ParseError> {
    let val: i64 = tok
        .text
        .parse()
        .map_err(|_| Diagnostic::error(line, tok.col, format!("invalid literal `{}`", tok.text)))?;
    if val == 0 {
        return Ok(None);
    }
    if val.unsigned_abs() > Var::MAX_IDX as u64 + 1 {
        return Err(Diagnostic::error(line, tok.col, format!("variable index {} out of range", val.unsigned_abs())));
    }
    Ok(Some(Lit::from_ipasir(val as i32).unwrap()))
}

fn parse_count(tok: Option<Token>, line: usize, what: &str) -> Result<u64, ParseError> {
    let tok = tok.ok_or_else(|| Diagnostic::error(line, 0, format!("malformed header: missing {what}")))?;
    tok.text
        .parse()
        .map_err(|_| Diagnostic::error(line, tok.col, format!("malformed header: invalid {what} `{}`", tok.text)))
}

fn mark_header_vars(vm: &mut dyn ManageVars, n_vars: u64, line: usize) -> Result<(), ParseError> {
    if n_vars > Var::MAX_IDX as u64 + 1 {
        return Err(Diagnostic::error(line, 0, "malformed header: too many variables"));
    }
    if n_vars > 0 {
        vm.mark_used(Var::new(n_vars as u32 - 1));
    }
    Ok(())
}

struct Header {
    line: usize,
    n_vars: u64,
    n_clauses: u64,
}

fn check_counts(header: &Option<Header>, n_clauses: usize, max_var: Option<Var>, warnings: &mut Vec<Diagnostic>) {
    let Some(h) = header else { return };
    if h.n_clauses != n_clauses as u64 {
        warnings.push(Diagnostic::warning(
            h.line,
            0,
            format!("header declares {} clauses, found {}", h.n_clauses, n_clauses),
        ));
    }
    if let Some(var) = max_var {
        if var.idx() as u64 >= h.n_vars {
            warnings.push(Diagnostic::warning(
                h.line,
                0,
                format!("header declares {} variables, found variable {}", h.n_vars, var.to_ipasir()),
            ));
        }
    }
}

/// Parses DIMACS CNF from bytes
pub fn parse_cnf_bytes(bytes: &[u8]) -> Result<Parsed<SatInstance>, ParseError> {
    let mut inst = SatInstance::new();
    let mut warnings = Vec::new();
    let mut header: Option<Header> = None;
    let mut clause = Clause::new();
    let mut open_line = 0;
    let mut max_var: Option<Var> = None;
    'lines: for (line, text) in lines(bytes, b'c')? {
        let mut toks = tokens(text).peekable();
        let first = toks.peek().unwrap();
        if first.text == "%" {
            break;
        }
        if first.text == "p" {
            let col = first.col;
            toks.next();
            if toks.next().map(|t| t.text) != Some("cnf") {
                return Err(Diagnostic::error(line, col, "malformed header: expected `p cnf`"));
            }
            let n_vars = parse_count(toks.next(), line, "variable count")?;
            let n_clauses = parse_count(toks.next(), line, "clause count")?;
            if let Some(extra) = toks.next() {
                return Err(Diagnostic::error(line, extra.col, "malformed header: trailing token"));
            }
            if header.is_some() {
                return Err(Diagnostic::error(line, col, "duplicate header"));
            }
            if inst.n_clauses() > 0 || !clause.is_empty() {
                warnings.push(Diagnostic::warning(line, col, "header after clauses"));
            }
            mark_header_vars(inst.var_manager_mut(), n_vars, line)?;
            header = Some(Header { line, n_vars, n_clauses });
            continue 'lines;
        }
        for tok in toks {
            match parse_lit(&tok, line)? {
                Some(lit) => {
                    max_var = max_var.max(Some(lit.var()));
                    clause.add(lit);
                    open_line = line;
                }
                None => inst.add_clause(std::mem::take(&mut clause)),
            }
        }
    }
    if !clause.is_empty() {
        return Err(Diagnostic::error(open_line, 0, "clause not terminated by 0"));
    }
    check_counts(&header, inst.n_clauses(), max_var, &mut warnings);
    Ok(Parsed { value: inst, warnings })
}

/// Parses DIMACS CNF
pub fn parse_cnf<R: Read>(mut reader: R) -> Result<Parsed<SatInstance>, Error> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    Ok(parse_cnf_bytes(&bytes)?)
}

enum WcnfMode {
    Unknown,
    New,
    Legacy { top: Option<u64> },
}

/// Parses WCNF from bytes. Both the current format (`h` marks hard
/// clauses) and the legacy format with a `p wcnf` header, where a weight of
/// at least `top` marks a hard clause, are accepted.
pub fn parse_wcnf_bytes(bytes: &[u8]) -> Result<Parsed<OptInstance>, ParseError> {
    let mut hards = SatInstance::new();
    let mut obj = Objective::new();
    let mut n_softs = 0;
    let mut warnings = Vec::new();
    let mut header: Option<Header> = None;
    let mut mode = WcnfMode::Unknown;
    // weight of the open clause, `None` for hard
    let mut open: Option<(Option<usize>, Clause, usize)> = None;
    let mut max_var: Option<Var> = None;
    for (line, text) in lines(bytes, b'c')? {
        let mut toks = tokens(text).peekable();
        let first = toks.peek().unwrap();
        if first.text == "p" && open.is_none() {
            let col = first.col;
            toks.next();
            if toks.next().map(|t| t.text) != Some("wcnf") {
                return Err(Diagnostic::error(line, col, "malformed header: expected `p wcnf`"));
            }
            if header.is_some() {
                return Err(Diagnostic::error(line, col, "duplicate header"));
            }
            if !matches!(mode, WcnfMode::Unknown) || hards.n_clauses() + n_softs > 0 {
                return Err(Diagnostic::error(line, col, "header after clauses"));
            }
            let n_vars = parse_count(toks.next(), line, "variable count")?;
            let n_clauses = parse_count(toks.next(), line, "clause count")?;
            let top = match toks.next() {
                Some(tok) => Some(parse_count(Some(tok), line, "top weight")?),
                None => None,
            };
            if let Some(extra) = toks.next() {
                return Err(Diagnostic::error(line, extra.col, "malformed header: trailing token"));
            }
            mark_header_vars(hards.var_manager_mut(), n_vars, line)?;
            header = Some(Header { line, n_vars, n_clauses });
            mode = WcnfMode::Legacy { top };
            continue;
        }
        for tok in toks {
            match &mut open {
                None => {
                    if tok.text == "h" {
                        match mode {
                            WcnfMode::Legacy { .. } => {
                                return Err(Diagnostic::error(line, tok.col, "mixed formats: `h` line after `p wcnf` header"))
                            }
                            _ => mode = WcnfMode::New,
                        }
                        open = Some((None, Clause::new(), line));
                        continue;
                    }
                    let weight: i128 = tok
                        .text
                        .parse()
                        .map_err(|_| Diagnostic::error(line, tok.col, format!("invalid weight `{}`", tok.text)))?;
                    if weight <= 0 {
                        return Err(Diagnostic::error(line, tok.col, "weight must be positive"));
                    }
                    let weight = u64::try_from(weight)
                        .ok()
                        .and_then(|w| usize::try_from(w).ok())
                        .ok_or_else(|| Diagnostic::error(line, tok.col, "weight out of range"))?;
                    let hard = matches!(mode, WcnfMode::Legacy { top: Some(top) } if weight as u64 >= top);
                    open = Some(((!hard).then_some(weight), Clause::new(), line));
                }
                Some((weight, clause, start)) => match parse_lit(&tok, line)? {
                    Some(lit) => {
                        max_var = max_var.max(Some(lit.var()));
                        clause.add(lit);
                        *start = line;
                    }
                    None => {
                        let cl = std::mem::take(clause);
                        match weight {
                            None => hards.add_clause(cl),
                            Some(w) => {
                                obj.add_soft_clause(cl, *w).unwrap();
                                n_softs += 1;
                            }
                        }
                        open = None;
                    }
                },
            }
        }
    }
    if let Some((_, _, start)) = open {
        return Err(Diagnostic::error(start, 0, "clause not terminated by 0"));
    }
    check_counts(&header, hards.n_clauses() + n_softs, max_var, &mut warnings);
    Ok(Parsed {
        value: OptInstance::compose(hards, obj),
        warnings,
    })
}

/// Parses WCNF in the current or the legacy format
pub fn parse_wcnf<R: Read>(mut reader: R) -> Result<Parsed<OptInstance>, Error> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    Ok(parse_wcnf_bytes(&bytes)?)
}

fn write_clause<W: Write>(w: &mut W, cl: &Clause) -> std::io::Result<()> {
    for lit in cl {
        write!(w, "{} ", lit.to_ipasir())?;
    }
    writeln!(w, "0")
}

/// Writes DIMACS CNF. The header declares at least `n_vars` variables.
pub fn write_cnf<W: Write>(w: &mut W, cnf: &Cnf, n_vars: u32) -> std::io::Result<()> {
    let n_vars = cnf.max_var().map_or(0, |v| v.idx32() + 1).max(n_vars);
    writeln!(w, "p cnf {} {}", n_vars, cnf.len())?;
    for cl in cnf {
        write_clause(w, cl)?;
    }
    Ok(())
}

/// Writes an instance consisting of clauses only as DIMACS CNF
pub fn write_cnf_instance<W: Write>(w: &mut W, inst: &SatInstance) -> Result<(), Error> {
    if inst.n_cards() + inst.n_pbs() > 0 {
        return Err(Error::Unsupported("cardinality or pseudo-Boolean constraints need encoding first"));
    }
    Ok(write_cnf(w, inst.cnf(), inst.n_vars())?)
}

/// Writes WCNF in the current format (`h` for hard clauses, no header).
/// Soft literals `(l, w)` are written as unit soft clauses `([!l], w)`.
pub fn write_wcnf<W: Write>(w: &mut W, inst: &OptInstance) -> Result<(), Error> {
    let cons = inst.constraints();
    if cons.n_cards() + cons.n_pbs() > 0 {
        return Err(Error::Unsupported("cardinality or pseudo-Boolean constraints need encoding first"));
    }
    if inst.objective().offset() != 0 {
        return Err(Error::Unsupported("objective offset"));
    }
    for cl in cons.cnf() {
        write!(w, "h ")?;
        write_clause(w, cl)?;
    }
    for &(lit, weight) in inst.objective().soft_lits() {
        writeln!(w, "{} {} 0", weight, (!lit).to_ipasir())?;
    }
    for (cl, weight) in inst.objective().soft_clauses() {
        write!(w, "{weight} ")?;
        write_clause(w, cl)?;
    }
    Ok(())
}
