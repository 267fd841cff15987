use std::{fs::File, io::BufReader, path::Path};

use crate::{
    io::{self, OpbOptions},
    types::{Assignment, Clause, Lit, TernaryVal, Var},
};

use super::{InstanceError, ManageVars, SatInstance};

/// A minimization objective.
///
/// Holds soft literals, where `(l, w)` costs `w` if `l` is true, and soft
/// clauses, where `(C, w)` costs `w` if `C` is falsified, plus a constant
/// offset. A unit soft clause `([l], w)` is the soft literal `(!l, w)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Objective {
    offset: i64,
    lits: Vec<(Lit, usize)>,
    soft_clauses: Vec<(Clause, usize)>,
}

impl Objective {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a term costing `weight` whenever `lit` is true
    pub fn add_soft_lit(&mut self, lit: Lit, weight: usize) -> Result<(), InstanceError> {
        if weight == 0 {
            return Err(InstanceError::ZeroWeight);
        }
        self.lits.push((lit, weight));
        Ok(())
    }

    /// Adds a soft clause costing `weight` whenever it is falsified
    pub fn add_soft_clause(&mut self, cl: Clause, weight: usize) -> Result<(), InstanceError> {
        if weight == 0 {
            return Err(InstanceError::ZeroWeight);
        }
        self.soft_clauses.push((cl, weight));
        Ok(())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: i64) {
        self.offset = offset;
    }

    pub fn soft_lits(&self) -> &[(Lit, usize)] {
        &self.lits
    }

    pub fn soft_clauses(&self) -> &[(Clause, usize)] {
        &self.soft_clauses
    }

    pub fn n_softs(&self) -> usize {
        self.lits.len() + self.soft_clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_softs() == 0
    }

    /// Whether the objective consists of soft literals only
    pub fn is_linear(&self) -> bool {
        self.soft_clauses.is_empty()
    }

    /// Whether the objective consists of soft clauses only
    pub fn is_clausal(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn weight_sum(&self) -> usize {
        self.lits.iter().map(|&(_, w)| w).sum::<usize>() + self.soft_clauses.iter().map(|&(_, w)| w).sum::<usize>()
    }

    pub fn max_var(&self) -> Option<Var> {
        let lits = self.lits.iter().map(|(l, _)| l.var());
        let cls = self.soft_clauses.iter().filter_map(|(cl, _)| cl.max_var());
        lits.chain(cls).max()
    }

    /// The cost of an assignment, `None` if it depends on unassigned variables
    pub fn cost(&self, assign: &Assignment) -> Option<i128> {
        let mut cost = self.offset as i128;
        for &(l, w) in &self.lits {
            match assign.lit_value(l) {
                TernaryVal::True => cost += w as i128,
                TernaryVal::False => {}
                TernaryVal::DontCare => return None,
            }
        }
        for (cl, w) in &self.soft_clauses {
            match cl.evaluate(assign) {
                TernaryVal::False => cost += *w as i128,
                TernaryVal::True => {}
                TernaryVal::DontCare => return None,
            }
        }
        Some(cost)
    }

    /// Converts every soft literal `(l, w)` into the unit soft clause `([!l], w)`
    pub fn into_soft_clauses(self) -> Objective {
        let mut soft_clauses: Vec<(Clause, usize)> =
            self.lits.into_iter().map(|(l, w)| (Clause::from([!l]), w)).collect();
        soft_clauses.extend(self.soft_clauses);
        Objective {
            offset: self.offset,
            lits: vec![],
            soft_clauses,
        }
    }

    /// Converts every soft clause into a soft literal. Unit clauses convert
    /// directly; a longer clause `C` gets a fresh relaxation literal `r`,
    /// which is penalized when true, and the hard clause `C | r` is returned.
    pub fn into_linear(self, var_manager: &mut dyn ManageVars) -> Result<(Objective, Vec<Clause>), InstanceError> {
        let mut lits = self.lits;
        let mut offset = self.offset;
        let mut hards = Vec::new();
        for (mut cl, w) in self.soft_clauses {
            match cl.len() {
                0 => {
                    offset = i64::try_from(w)
                        .ok()
                        .and_then(|w| offset.checked_add(w))
                        .ok_or(crate::types::WeightOverflow)?
                }
                1 => lits.push((!cl[0], w)),
                _ => {
                    let r = var_manager.try_new_var()?.pos_lit();
                    cl.add(r);
                    hards.push(cl);
                    lits.push((r, w));
                }
            }
        }
        let obj = Objective {
            offset,
            lits,
            soft_clauses: vec![],
        };
        Ok((obj, hards))
    }
}

/// An optimization instance: constraints and an objective over the same
/// variables
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptInstance {
    constraints: SatInstance,
    objective: Objective,
}

impl OptInstance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Combines constraints and an objective, marking the objective's
    /// variables as used
    pub fn compose(mut constraints: SatInstance, objective: Objective) -> Self {
        if let Some(var) = objective.max_var() {
            constraints.var_manager_mut().mark_used(var);
        }
        OptInstance { constraints, objective }
    }

    pub fn decompose(self) -> (SatInstance, Objective) {
        (self.constraints, self.objective)
    }

    pub fn constraints(&self) -> &SatInstance {
        &self.constraints
    }

    pub fn constraints_mut(&mut self) -> &mut SatInstance {
        &mut self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn new_var(&mut self) -> Var {
        self.constraints.new_var()
    }

    pub fn add_hard_clause(&mut self, cl: Clause) {
        self.constraints.add_clause(cl);
    }

    pub fn add_soft_lit(&mut self, lit: Lit, weight: usize) -> Result<(), InstanceError> {
        self.objective.add_soft_lit(lit, weight)?;
        self.constraints.var_manager_mut().mark_used(lit.var());
        Ok(())
    }

    pub fn add_soft_clause(&mut self, cl: Clause, weight: usize) -> Result<(), InstanceError> {
        if let Some(var) = cl.max_var() {
            self.constraints.var_manager_mut().mark_used(var);
        }
        self.objective.add_soft_clause(cl, weight)
    }

    /// The objective cost of an assignment, `None` if it depends on
    /// unassigned variables
    pub fn cost(&self, assign: &Assignment) -> Option<i128> {
        self.objective.cost(assign)
    }

    /// Relaxes all soft clauses into soft literals, adding the relaxation
    /// clauses to the constraints
    pub fn into_linear(self) -> Result<(SatInstance, Objective), InstanceError> {
        let (mut constraints, objective) = self.decompose();
        let (objective, hards) = objective.into_linear(constraints.var_manager_mut())?;
        for cl in hards {
            constraints.add_clause(cl);
        }
        Ok((constraints, objective))
    }

    /// Parses a WCNF file in the current or the legacy format
    pub fn from_dimacs_path<P: AsRef<Path>>(path: P) -> Result<Self, io::Error> {
        let reader = BufReader::new(File::open(path)?);
        Ok(io::dimacs::parse_wcnf(reader)?.value)
    }

    /// Parses an OPB file with objective
    pub fn from_opb_path<P: AsRef<Path>>(path: P, opts: OpbOptions) -> Result<Self, io::Error> {
        let reader = BufReader::new(File::open(path)?);
        match io::opb::parse(reader, opts)?.value {
            io::opb::OpbInstance::Opt(inst) => Ok(inst),
            io::opb::OpbInstance::Sat(inst) => Ok(OptInstance::compose(inst, Objective::new())),
        }
    }
}
