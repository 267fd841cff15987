use std::{fs::File, io::BufReader, ops::Index, path::Path};

use crate::{
    encodings::{
        am1::{self, Encode as _},
        card::{self, BoundLower as _, BoundUpper as _},
        pb::{self, BoundLower as _, BoundUpper as _},
        CollectClauses,
    },
    io::{self, OpbOptions},
    types::{Assignment, CardConstraint, Clause, Lit, PbConstraint, PbNormalized, Relation, TernaryVal, Var},
};

use super::{BasicVarManager, InstanceError, ManageVars};

/// A plain conjunction of clauses
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_clause(&mut self, cl: Clause) {
        self.clauses.push(cl);
    }

    pub fn add_unit(&mut self, lit: Lit) {
        self.add_clause(Clause::from([lit]));
    }

    pub fn add_binary(&mut self, a: Lit, b: Lit) {
        self.add_clause(Clause::from([a, b]));
    }

    /// Adds `a -> b`
    pub fn add_lit_impl_lit(&mut self, a: Lit, b: Lit) {
        self.add_binary(!a, b);
    }

    /// Adds `a -> (b1 | ... | bn)`
    pub fn add_lit_impl_clause(&mut self, a: Lit, b: &[Lit]) {
        let mut cl = Clause::with_capacity(b.len() + 1);
        cl.add(!a);
        cl.extend(b.iter().copied());
        self.add_clause(cl);
    }

    /// Adds `(a1 & ... & an) -> b`
    pub fn add_cube_impl_lit(&mut self, a: &[Lit], b: Lit) {
        let mut cl: Clause = a.iter().map(|&l| !l).collect();
        cl.add(b);
        self.add_clause(cl);
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Clause> {
        self.clauses.iter()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    pub fn max_var(&self) -> Option<Var> {
        self.clauses.iter().filter_map(Clause::max_var).max()
    }

    /// `True` if every clause is satisfied, `False` if one is falsified
    pub fn evaluate(&self, assign: &Assignment) -> TernaryVal {
        let mut result = TernaryVal::True;
        for cl in &self.clauses {
            match cl.evaluate(assign) {
                TernaryVal::False => return TernaryVal::False,
                TernaryVal::DontCare => result = TernaryVal::DontCare,
                TernaryVal::True => {}
            }
        }
        result
    }
}

impl CollectClauses for Cnf {
    fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    fn add_clause(&mut self, cl: Clause) {
        self.clauses.push(cl);
    }
}

impl Index<usize> for Cnf {
    type Output = Clause;

    fn index(&self, idx: usize) -> &Clause {
        &self.clauses[idx]
    }
}

impl FromIterator<Clause> for Cnf {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        Cnf {
            clauses: iter.into_iter().collect(),
        }
    }
}

impl Extend<Clause> for Cnf {
    fn extend<I: IntoIterator<Item = Clause>>(&mut self, iter: I) {
        self.clauses.extend(iter)
    }
}

impl IntoIterator for Cnf {
    type Item = Clause;
    type IntoIter = std::vec::IntoIter<Clause>;

    fn into_iter(self) -> Self::IntoIter {
        self.clauses.into_iter()
    }
}

impl<'a> IntoIterator for &'a Cnf {
    type Item = &'a Clause;
    type IntoIter = std::slice::Iter<'a, Clause>;

    fn into_iter(self) -> Self::IntoIter {
        self.clauses.iter()
    }
}

/// Encoding used for at-most-one constraints
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Am1Encoding {
    /// Pairwise up to five literals, commander above
    #[default]
    Auto,
    Pairwise,
    Ladder,
    Bitwise,
    Commander,
    Bimander,
}

/// Encoding used for general cardinality constraints
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CardEncoding {
    #[default]
    Totalizer,
    /// Binary adder with unit weights
    Adder,
}

/// Encoding used for pseudo-Boolean constraints
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PbEncoding {
    #[default]
    Gte,
    Adder,
    Dpw,
    /// Totalizer over repeated literals
    CardSim,
}

/// Encoder selection for [`SatInstance::into_cnf_with`]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodingConfig {
    pub am1: Am1Encoding,
    pub card: CardEncoding,
    pub pb: PbEncoding,
}

/// A satisfiability instance of clauses, cardinality and pseudo-Boolean
/// constraints
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SatInstance {
    cnf: Cnf,
    cards: Vec<CardConstraint>,
    pbs: Vec<PbConstraint>,
    var_manager: BasicVarManager,
}

impl SatInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_var_manager(var_manager: BasicVarManager) -> Self {
        SatInstance {
            var_manager,
            ..Default::default()
        }
    }

    pub fn var_manager(&self) -> &BasicVarManager {
        &self.var_manager
    }

    pub fn var_manager_mut(&mut self) -> &mut BasicVarManager {
        &mut self.var_manager
    }

    pub fn new_var(&mut self) -> Var {
        self.var_manager.new_var()
    }

    pub fn new_lit(&mut self) -> Lit {
        self.var_manager.new_var().pos_lit()
    }

    /// The highest used variable, including variables not occurring in any
    /// constraint but marked as used
    pub fn max_var(&self) -> Option<Var> {
        self.var_manager.max_var()
    }

    pub fn n_vars(&self) -> u32 {
        self.var_manager.n_used()
    }

    fn mark(&mut self, var: Option<Var>) {
        if let Some(var) = var {
            self.var_manager.mark_used(var);
        }
    }

    pub fn add_clause(&mut self, cl: Clause) {
        self.mark(cl.max_var());
        self.cnf.add_clause(cl);
    }

    pub fn add_unit(&mut self, lit: Lit) {
        self.add_clause(Clause::from([lit]));
    }

    pub fn add_binary(&mut self, a: Lit, b: Lit) {
        self.add_clause(Clause::from([a, b]));
    }

    /// Adds `a -> b`
    pub fn add_lit_impl_lit(&mut self, a: Lit, b: Lit) {
        self.add_clause(Clause::from([!a, b]));
    }

    /// Adds `a -> (b1 | ... | bn)`
    pub fn add_lit_impl_clause(&mut self, a: Lit, b: &[Lit]) {
        self.mark(b.iter().map(|l| l.var()).chain([a.var()]).max());
        self.cnf.add_lit_impl_clause(a, b);
    }

    /// Adds `(a1 & ... & an) -> b`
    pub fn add_cube_impl_lit(&mut self, a: &[Lit], b: Lit) {
        self.mark(a.iter().map(|l| l.var()).chain([b.var()]).max());
        self.cnf.add_cube_impl_lit(a, b);
    }

    pub fn add_card_constr(&mut self, card: CardConstraint) {
        self.mark(card.max_var());
        self.cards.push(card);
    }

    pub fn add_pb_constr(&mut self, pb: PbConstraint) {
        self.mark(pb.max_var());
        self.pbs.push(pb);
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn cards(&self) -> &[CardConstraint] {
        &self.cards
    }

    pub fn pbs(&self) -> &[PbConstraint] {
        &self.pbs
    }

    pub fn n_clauses(&self) -> usize {
        self.cnf.len()
    }

    pub fn n_cards(&self) -> usize {
        self.cards.len()
    }

    pub fn n_pbs(&self) -> usize {
        self.pbs.len()
    }

    /// Splits the instance into its parts
    pub fn into_parts(self) -> (Cnf, Vec<CardConstraint>, Vec<PbConstraint>, BasicVarManager) {
        (self.cnf, self.cards, self.pbs, self.var_manager)
    }

    /// Evaluates all constraints
    pub fn evaluate(&self, assign: &Assignment) -> TernaryVal {
        let mut result = self.cnf.evaluate(assign);
        if result == TernaryVal::False {
            return result;
        }
        let vals = self
            .cards
            .iter()
            .map(|c| c.evaluate(assign))
            .chain(self.pbs.iter().map(|c| c.evaluate(assign)));
        for val in vals {
            match val {
                TernaryVal::False => return TernaryVal::False,
                TernaryVal::DontCare => result = TernaryVal::DontCare,
                TernaryVal::True => {}
            }
        }
        result
    }

    /// Converts all constraints to clauses with the default encodings
    pub fn into_cnf(self) -> Result<(Cnf, BasicVarManager), InstanceError> {
        self.into_cnf_with(EncodingConfig::default())
    }

    /// Converts all constraints to clauses. Clause-expressible constraints
    /// become clauses directly; others are encoded with the selected
    /// encoders, drawing auxiliary variables from the returned manager.
    /// Identical clauses are not merged.
    pub fn into_cnf_with(self, config: EncodingConfig) -> Result<(Cnf, BasicVarManager), InstanceError> {
        let SatInstance {
            mut cnf,
            cards,
            pbs,
            mut var_manager,
        } = self;
        for card in cards {
            if card.has_complementary_lits() {
                lower_pb(card.into_pb(), config, &mut cnf, &mut var_manager)?;
            } else {
                let rel = card.relation();
                let bound = card.bound();
                lower_card(card.lits(), rel, bound, config, &mut cnf, &mut var_manager)?;
            }
        }
        for pb in pbs {
            lower_pb(pb, config, &mut cnf, &mut var_manager)?;
        }
        Ok((cnf, var_manager))
    }

    /// Parses a DIMACS CNF file
    pub fn from_dimacs_path<P: AsRef<Path>>(path: P) -> Result<Self, io::Error> {
        let reader = BufReader::new(File::open(path)?);
        Ok(io::dimacs::parse_cnf(reader)?.value)
    }

    /// Parses an OPB file without objective
    pub fn from_opb_path<P: AsRef<Path>>(path: P, opts: OpbOptions) -> Result<Self, io::Error> {
        let reader = BufReader::new(File::open(path)?);
        match io::opb::parse(reader, opts)?.value {
            io::opb::OpbInstance::Sat(inst) => Ok(inst),
            io::opb::OpbInstance::Opt(_) => Err(io::Error::UnexpectedObjective),
        }
    }
}

/// Lowers a cardinality constraint without complementary literals
fn lower_card(
    lits: &[Lit],
    rel: Relation,
    bound: usize,
    config: EncodingConfig,
    cnf: &mut Cnf,
    vm: &mut dyn ManageVars,
) -> Result<(), InstanceError> {
    let n = lits.len();
    match rel {
        Relation::Eq => {
            lower_card(lits, Relation::Le, bound, config, cnf, vm)?;
            lower_card(lits, Relation::Ge, bound, config, cnf, vm)
        }
        Relation::Le => {
            if bound >= n {
            } else if bound == 0 {
                lits.iter().for_each(|&l| cnf.add_unit(!l));
            } else if bound == n - 1 {
                cnf.add_clause(lits.iter().map(|&l| !l).collect());
            } else if bound == 1 {
                lower_am1(lits, config.am1, cnf, vm);
            } else {
                match config.card {
                    CardEncoding::Totalizer => {
                        let mut enc: card::Totalizer = lits.iter().copied().collect();
                        enc.assert_ub(bound, cnf, vm)?;
                    }
                    CardEncoding::Adder => {
                        let mut enc: pb::BinaryAdder = lits.iter().map(|&l| (l, 1)).collect();
                        enc.assert_ub(bound, cnf, vm)?;
                    }
                }
            }
            Ok(())
        }
        Relation::Ge => {
            if bound == 0 {
            } else if bound > n {
                cnf.add_clause(Clause::new());
            } else if bound == n {
                lits.iter().for_each(|&l| cnf.add_unit(l));
            } else if bound == 1 {
                cnf.add_clause(lits.iter().copied().collect());
            } else {
                match config.card {
                    CardEncoding::Totalizer => {
                        let mut enc: card::Totalizer = lits.iter().copied().collect();
                        enc.assert_lb(bound, cnf, vm)?;
                    }
                    CardEncoding::Adder => {
                        let mut enc: pb::BinaryAdder = lits.iter().map(|&l| (l, 1)).collect();
                        enc.assert_lb(bound, cnf, vm)?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn lower_am1(lits: &[Lit], enc: Am1Encoding, cnf: &mut Cnf, vm: &mut dyn ManageVars) {
    let lits = lits.iter().copied();
    match enc {
        Am1Encoding::Auto if lits.len() <= 5 => am1::Pairwise::from_iter(lits).encode(cnf, vm),
        Am1Encoding::Auto | Am1Encoding::Commander => am1::Commander::from_iter(lits).encode(cnf, vm),
        Am1Encoding::Pairwise => am1::Pairwise::from_iter(lits).encode(cnf, vm),
        Am1Encoding::Ladder => am1::Ladder::from_iter(lits).encode(cnf, vm),
        Am1Encoding::Bitwise => am1::Bitwise::from_iter(lits).encode(cnf, vm),
        Am1Encoding::Bimander => am1::Bimander::from_iter(lits).encode(cnf, vm),
    }
}

fn lower_pb(pb: PbConstraint, config: EncodingConfig, cnf: &mut Cnf, vm: &mut dyn ManageVars) -> Result<(), InstanceError> {
    let pb = match pb.normalize()? {
        PbNormalized::TriviallyTrue => return Ok(()),
        PbNormalized::TriviallyFalse => {
            cnf.add_clause(Clause::new());
            return Ok(());
        }
        PbNormalized::Constraint(pb) => pb,
    };
    let bound = pb.bound();
    match pb.relation() {
        Relation::Eq => {
            let terms = pb.terms().to_vec();
            lower_pb(PbConstraint::new_ub(terms.clone(), bound), config, cnf, vm)?;
            lower_pb(PbConstraint::new_lb(terms, bound), config, cnf, vm)
        }
        Relation::Le => {
            // normalized: 0 <= bound < weight sum
            let bound = bound as usize;
            let mut terms = Vec::with_capacity(pb.len());
            for &(l, w) in pb.terms() {
                if w as usize > bound {
                    cnf.add_unit(!l);
                } else {
                    terms.push((l, w as usize));
                }
            }
            lower_weighted(terms, Relation::Le, bound, config, cnf, vm)
        }
        Relation::Ge => {
            // normalized: 0 < bound <= weight sum
            let terms = pb.terms().iter().map(|&(l, w)| (l, w as usize)).collect();
            lower_weighted(terms, Relation::Ge, bound as usize, config, cnf, vm)
        }
    }
}

fn lower_weighted(
    terms: Vec<(Lit, usize)>,
    rel: Relation,
    bound: usize,
    config: EncodingConfig,
    cnf: &mut Cnf,
    vm: &mut dyn ManageVars,
) -> Result<(), InstanceError> {
    if terms.is_empty() {
        if rel == Relation::Ge && bound > 0 {
            cnf.add_clause(Clause::new());
        }
        return Ok(());
    }
    let w0 = terms[0].1;
    if terms.iter().all(|&(_, w)| w == w0) {
        let lits: Vec<Lit> = terms.iter().map(|&(l, _)| l).collect();
        let bound = match rel {
            Relation::Ge => bound.div_ceil(w0),
            _ => bound / w0,
        };
        return lower_card(&lits, rel, bound, config, cnf, vm);
    }
    let terms = terms.into_iter();
    match (rel, config.pb) {
        (Relation::Le, PbEncoding::Gte) => pb::GeneralizedTotalizer::from_iter(terms).assert_ub(bound, cnf, vm)?,
        (Relation::Le, PbEncoding::Dpw) => pb::DynamicPolyWatchdog::from_iter(terms).assert_ub(bound, cnf, vm)?,
        (Relation::Le, PbEncoding::Adder) => pb::BinaryAdder::from_iter(terms).assert_ub(bound, cnf, vm)?,
        (Relation::Le, PbEncoding::CardSim) => {
            pb::CardSim::<card::Totalizer>::from_iter(terms).assert_ub(bound, cnf, vm)?
        }
        (_, PbEncoding::Gte) => {
            pb::Inverted::<pb::GeneralizedTotalizer>::from_iter(terms).assert_lb(bound, cnf, vm)?
        }
        (_, PbEncoding::Dpw) => {
            pb::Inverted::<pb::DynamicPolyWatchdog>::from_iter(terms).assert_lb(bound, cnf, vm)?
        }
        (_, PbEncoding::Adder) => pb::BinaryAdder::from_iter(terms).assert_lb(bound, cnf, vm)?,
        (_, PbEncoding::CardSim) => {
            pb::CardSim::<card::Totalizer>::from_iter(terms).assert_lb(bound, cnf, vm)?
        }
    }
    Ok(())
}
