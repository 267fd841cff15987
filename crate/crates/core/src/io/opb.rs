//! OPB pseudo-Boolean format

use std::io::{Read, Write};

use crate::{
    instances::{ManageVars, Objective, OptInstance, SatInstance},
    types::{Clause, Lit, PbConstraint, PbNormalized, Relation, Var},
};

use super::{lines, Diagnostic, Error, ParseError, Parsed};

/// Dialect options for OPB files
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpbOptions {
    /// The index that the name `x<first_var_index>` maps to variable 0
    pub first_var_index: u32,
}

impl Default for OpbOptions {
    fn default() -> Self {
        OpbOptions { first_var_index: 1 }
    }
}

/// A parsed OPB file, which is an optimization instance iff it has an
/// objective line
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpbInstance {
    Sat(SatInstance),
    Opt(OptInstance),
}

/// Token with its position, `;` is always a token of its own
struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokenize<'a>(lines: &[(usize, &'a str)]) -> Vec<Tok<'a>> {
    let mut out = Vec::new();
    for &(line, text) in lines {
        let bytes = text.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            let start = pos;
            if bytes[pos] == b';' {
                pos += 1;
            } else {
                while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b';' {
                    pos += 1;
                }
            }
            out.push(Tok {
                text: &text[start..pos],
                line,
                col: start + 1,
            });
        }
    }
    out
}

/// Reads the `#variable=` count from the conventional first comment line
fn declared_vars(bytes: &[u8]) -> Option<u64> {
    let first = bytes.split(|&b| b == b'\n').next()?;
    let text = std::str::from_utf8(first).ok()?;
    if !text.trim_start().starts_with('*') {
        return None;
    }
    let mut words = text.split_whitespace();
    while let Some(word) = words.next() {
        if word == "#variable=" {
            return words.next()?.parse().ok();
        }
    }
    None
}

/// Reads the offset recorded by [`write_opt`] in a comment line
fn commented_offset(bytes: &[u8]) -> Option<i64> {
    bytes.split(|&b| b == b'\n').find_map(|line| {
        let text = std::str::from_utf8(line).ok()?.trim();
        text.strip_prefix('*')?.trim().strip_prefix("objective offset")?.trim().parse().ok()
    })
}

struct Parser<'a, 'b> {
    toks: &'b [Tok<'a>],
    pos: usize,
    opts: OpbOptions,
    last_line: usize,
}

impl<'a, 'b> Parser<'a, 'b> {
    fn peek(&self) -> Option<&'b Tok<'a>> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'b Tok<'a>> {
        let tok = self.toks.get(self.pos);
        self.pos += 1;
        tok
    }

    fn eof_error(&self, what: &str) -> ParseError {
        Diagnostic::error(self.last_line, 0, format!("unexpected end of input, expected {what}"))
    }

    fn parse_int(&self, tok: &Tok) -> Result<i64, ParseError> {
        let text = tok.text.strip_prefix('+').unwrap_or(tok.text);
        text.parse()
            .map_err(|_| Diagnostic::error(tok.line, tok.col, format!("invalid integer `{}`", tok.text)))
    }

    fn parse_lit(&self, tok: &Tok) -> Result<Lit, ParseError> {
        let (neg, name) = match tok.text.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, tok.text),
        };
        let idx = name
            .strip_prefix('x')
            .and_then(|i| i.parse::<u64>().ok())
            .ok_or_else(|| Diagnostic::error(tok.line, tok.col, format!("invalid variable `{}`", tok.text)))?;
        let first = self.opts.first_var_index as u64;
        if idx < first {
            return Err(Diagnostic::error(
                tok.line,
                tok.col,
                format!("variable index {idx} below first index {first}"),
            ));
        }
        let var = u32::try_from(idx - first)
            .ok()
            .and_then(|i| Var::try_new(i).ok())
            .ok_or_else(|| Diagnostic::error(tok.line, tok.col, "variable index out of range"))?;
        Ok(var.lit(neg))
    }

    /// Parses `<coef> <lit>` pairs until a token that is neither
    fn parse_terms(&mut self) -> Result<Vec<(Lit, i64)>, ParseError> {
        let mut terms = Vec::new();
        loop {
            let Some(tok) = self.peek() else {
                return Err(self.eof_error("a term or `;`"));
            };
            let text = tok.text;
            if text == ";" || text == ">=" || text == "<=" || text == "=" {
                return Ok(terms);
            }
            let coef_tok = self.next().unwrap();
            let coef = if coef_tok.text == "+" || coef_tok.text == "-" {
                let neg = coef_tok.text == "-";
                let num = self.next().ok_or_else(|| self.eof_error("a coefficient"))?;
                let c = self.parse_int(num)?;
                if neg {
                    c.checked_neg()
                        .ok_or_else(|| Diagnostic::error(num.line, num.col, "coefficient out of range"))?
                } else {
                    c
                }
            } else {
                self.parse_int(coef_tok)?
            };
            let lit_tok = self.next().ok_or_else(|| self.eof_error("a variable"))?;
            let lit = self.parse_lit(lit_tok)?;
            terms.push((lit, coef));
        }
    }

    fn expect_semicolon(&mut self) -> Result<(), ParseError> {
        match self.next() {
            Some(tok) if tok.text == ";" => Ok(()),
            Some(tok) => Err(Diagnostic::error(tok.line, tok.col, format!("expected `;`, found `{}`", tok.text))),
            None => Err(self.eof_error("`;`")),
        }
    }
}

/// Parses OPB from bytes. Constraints are normalized; trivially true ones
/// are dropped and trivially false ones become the empty clause, both with
/// a warning.
pub fn parse_bytes(bytes: &[u8], opts: OpbOptions) -> Result<Parsed<OpbInstance>, ParseError> {
    let lines = lines(bytes, b'*')?;
    let toks = tokenize(&lines);
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        opts,
        last_line: lines.last().map_or(1, |l| l.0),
    };
    let mut inst = SatInstance::new();
    if let Some(n) = declared_vars(bytes) {
        if n > 0 && n <= Var::MAX_IDX as u64 + 1 {
            inst.var_manager_mut().mark_used(Var::new(n as u32 - 1));
        }
    }
    let mut warnings = Vec::new();
    let mut objective: Option<Objective> = None;
    while let Some(tok) = parser.peek() {
        let (line, col) = (tok.line, tok.col);
        if tok.text == "min:" || tok.text == "min" {
            if parser.pos > 0 || objective.is_some() {
                return Err(Diagnostic::error(line, col, "objective must be the first statement"));
            }
            parser.next();
            if tok.text == "min" {
                match parser.next() {
                    Some(t) if t.text == ":" => {}
                    _ => return Err(Diagnostic::error(line, col, "expected `min:`")),
                }
            }
            let terms = parser.parse_terms()?;
            parser.expect_semicolon()?;
            let mut obj = Objective::new();
            let mut offset: i64 = 0;
            for (lit, coef) in terms {
                if coef > 0 {
                    obj.add_soft_lit(lit, coef as usize).unwrap();
                } else if coef < 0 {
                    // c * l = -c * ~l + c
                    obj.add_soft_lit(!lit, coef.unsigned_abs() as usize).unwrap();
                    offset = offset
                        .checked_add(coef)
                        .ok_or_else(|| Diagnostic::error(line, col, "objective offset overflow"))?;
                }
            }
            if let Some(extra) = commented_offset(bytes) {
                offset = offset
                    .checked_add(extra)
                    .ok_or_else(|| Diagnostic::error(line, col, "objective offset overflow"))?;
            }
            obj.set_offset(offset);
            objective = Some(obj);
            continue;
        }
        if tok.text == "max:" || tok.text == "max" {
            return Err(Diagnostic::error(line, col, "maximization objectives are not supported"));
        }
        let terms = parser.parse_terms()?;
        let rel_tok = parser.next().ok_or_else(|| parser.eof_error("a relational operator"))?;
        let rel = match rel_tok.text {
            ">=" => Relation::Ge,
            "<=" => Relation::Le,
            "=" => Relation::Eq,
            other => {
                return Err(Diagnostic::error(
                    rel_tok.line,
                    rel_tok.col,
                    format!("unknown relational operator `{other}`"),
                ))
            }
        };
        let bound_tok = parser.next().ok_or_else(|| parser.eof_error("a bound"))?;
        let bound = parser.parse_int(bound_tok)?;
        parser.expect_semicolon()?;
        for &(lit, _) in &terms {
            inst.var_manager_mut().mark_used(lit.var());
        }
        let pb = PbConstraint::new(terms, rel, bound);
        match pb.normalize() {
            Err(_) => return Err(Diagnostic::error(line, col, "coefficient overflow")),
            Ok(PbNormalized::TriviallyTrue) => {
                warnings.push(Diagnostic::warning(line, col, "trivially satisfied constraint dropped"))
            }
            Ok(PbNormalized::TriviallyFalse) => {
                warnings.push(Diagnostic::warning(line, col, "unsatisfiable constraint"));
                inst.add_clause(Clause::new());
            }
            Ok(PbNormalized::Constraint(pb)) => inst.add_pb_constr(pb),
        }
    }
    let value = match objective {
        Some(obj) => OpbInstance::Opt(OptInstance::compose(inst, obj)),
        None => OpbInstance::Sat(inst),
    };
    Ok(Parsed { value, warnings })
}

/// Parses OPB
pub fn parse<R: Read>(mut reader: R, opts: OpbOptions) -> Result<Parsed<OpbInstance>, Error> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    Ok(parse_bytes(&bytes, opts)?)
}

fn write_lit<W: Write>(w: &mut W, lit: Lit, opts: OpbOptions) -> std::io::Result<()> {
    let idx = lit.var().idx() as u64 + opts.first_var_index as u64;
    if lit.is_neg() {
        write!(w, "~x{idx}")
    } else {
        write!(w, "x{idx}")
    }
}

fn write_terms<W: Write, I: IntoIterator<Item = (Lit, i64)>>(w: &mut W, terms: I, opts: OpbOptions) -> std::io::Result<()> {
    for (lit, coef) in terms {
        write!(w, "{coef:+} ")?;
        write_lit(w, lit, opts)?;
        write!(w, " ")?;
    }
    Ok(())
}

fn write_constraints<W: Write>(w: &mut W, inst: &SatInstance, opts: OpbOptions) -> std::io::Result<()> {
    for cl in inst.cnf() {
        write_terms(w, cl.iter().map(|&l| (l, 1)), opts)?;
        writeln!(w, ">= 1 ;")?;
    }
    for card in inst.cards() {
        write_terms(w, card.lits().iter().map(|&l| (l, 1)), opts)?;
        writeln!(w, "{} {} ;", card.relation(), card.bound())?;
    }
    for pb in inst.pbs() {
        write_terms(w, pb.terms().iter().copied(), opts)?;
        writeln!(w, "{} {} ;", pb.relation(), pb.bound())?;
    }
    Ok(())
}

fn write_header<W: Write>(w: &mut W, inst: &SatInstance) -> std::io::Result<()> {
    let n_constrs = inst.n_clauses() + inst.n_cards() + inst.n_pbs();
    writeln!(w, "* #variable= {} #constraint= {}", inst.n_vars(), n_constrs)
}

/// Writes a satisfiability instance. Clauses are written as `>= 1`
/// constraints.
pub fn write_sat<W: Write>(w: &mut W, inst: &SatInstance, opts: OpbOptions) -> std::io::Result<()> {
    write_header(w, inst)?;
    write_constraints(w, inst, opts)
}

/// Writes an optimization instance. Soft clauses must be unit clauses; a
/// nonzero objective offset is recorded in a comment that [`parse_bytes`]
/// reads back.
pub fn write_opt<W: Write>(w: &mut W, inst: &OptInstance, opts: OpbOptions) -> Result<(), Error> {
    let obj = inst.objective();
    if obj.soft_clauses().iter().any(|(cl, _)| cl.len() != 1) {
        return Err(Error::Unsupported("non-unit soft clauses need relaxation first"));
    }
    write_header(w, inst.constraints())?;
    if obj.offset() != 0 {
        writeln!(w, "* objective offset {}", obj.offset())?;
    }
    write!(w, "min: ")?;
    let lits = obj
        .soft_lits()
        .iter()
        .map(|&(l, c)| (l, c as i64))
        .chain(obj.soft_clauses().iter().map(|(cl, c)| (!cl[0], *c as i64)));
    write_terms(w, lits, opts)?;
    writeln!(w, ";")?;
    write_constraints(w, inst.constraints(), opts)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit;

    fn sat(text: &str) -> SatInstance {
        match parse_bytes(text.as_bytes(), OpbOptions::default()).unwrap().value {
            OpbInstance::Sat(inst) => inst,
            OpbInstance::Opt(_) => panic!("unexpected objective"),
        }
    }

    #[test]
    fn simple_constraint() {
        let inst = sat("+2 x1 +3 x2 >= 3 ;");
        assert_eq!(inst.pbs(), &[PbConstraint::new_lb([(lit![0], 2), (lit![1], 3)], 3)]);
    }

    #[test]
    fn objective() {
        let parsed = parse_bytes(b"min: +1 x1 ;\n+1 x1 +1 x2 >= 1 ;", OpbOptions::default()).unwrap();
        let OpbInstance::Opt(inst) = parsed.value else {
            panic!("expected objective")
        };
        assert_eq!(inst.objective().soft_lits(), &[(lit![0], 1)]);
    }

    #[test]
    fn normalizes_negative_coefs() {
        let inst = sat("-2 x1 +1 x2 <= -1 ;");
        assert_eq!(inst.pbs(), &[PbConstraint::new_ub([(!lit![0], 2), (lit![1], 1)], 1)]);
    }

    #[test]
    fn first_var_index() {
        let opts = OpbOptions { first_var_index: 0 };
        let OpbInstance::Sat(inst) = parse_bytes(b"+1 x0 +1 ~x3 >= 1;", opts).unwrap().value else {
            panic!()
        };
        assert_eq!(inst.pbs()[0].terms(), &[(lit![0], 1), (!lit![3], 1)]);
        assert!(parse_bytes(b"+1 x0 >= 1 ;", OpbOptions::default()).is_err());
    }

    #[test]
    fn errors() {
        let opts = OpbOptions::default();
        assert!(parse_bytes(b"+1 x1 > 1 ;", opts).is_err());
        assert!(parse_bytes(b"+a x1 >= 1 ;", opts).is_err());
        assert!(parse_bytes(b"+1 x1 >= 1", opts).is_err());
        assert!(parse_bytes(b"+1 y1 >= 1 ;", opts).is_err());
    }

    #[test]
    fn trivial_constraints() {
        let parsed = parse_bytes(b"+1 x1 >= 0 ;\n+1 x1 >= 2 ;\n", OpbOptions::default()).unwrap();
        assert_eq!(parsed.warnings.len(), 2);
        let OpbInstance::Sat(inst) = parsed.value else { panic!() };
        assert_eq!(inst.cnf().clauses(), &[Clause::new()]);
        assert!(inst.pbs().is_empty());
    }

    #[test]
    fn write_parse() {
        let mut inst = SatInstance::new();
        inst.add_pb_constr(PbConstraint::new_ub([(lit![0], 2), (!lit![2], 1)], 2));
        let mut out = Vec::new();
        write_sat(&mut out, &inst, OpbOptions::default()).unwrap();
        assert_eq!(
            String::from_utf8(out.clone()).unwrap(),
            "* #variable= 3 #constraint= 1\n+2 x1 +1 ~x3 <= 2 ;\n"
        );
        assert_eq!(sat(std::str::from_utf8(&out).unwrap()), inst);
    }

    #[test]
    fn offset_roundtrip() {
        let opts = OpbOptions::default();
        let OpbInstance::Opt(inst) = parse_bytes(b"min: -2 x1 +1 x2 ;\n", opts).unwrap().value else {
            panic!("objective lost");
        };
        assert_eq!(inst.objective().offset(), -2);
        let mut out = vec![];
        write_opt(&mut out, &inst, opts).unwrap();
        let OpbInstance::Opt(back) = parse_bytes(&out, opts).unwrap().value else {
            panic!("objective lost");
        };
        assert_eq!(back.objective(), inst.objective());
    }
}
