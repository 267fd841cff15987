//! # Solver Interface
//!
//! Solvers expose their capabilities through traits. Every solver
//! implements [`Solve`]; incremental solvers add [`SolveIncremental`].
//! Optional capabilities are separate traits, so calling a capability a
//! solver lacks does not compile.
//!
//! Two backends are bundled: [`DpllSolver`], a small complete solver, and
//! [`ExternalSolver`], which runs a solver binary on DIMACS input.

use std::{fmt, time::Duration};

use thiserror::Error;

use crate::{
    instances::Cnf,
    types::{Assignment, Clause, Lit, TernaryVal, Var},
};

mod dpll;
mod external;

pub use dpll::{DpllInterrupter, DpllSolver};
pub use external::{ExternalSolver, InputMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverResult {
    Sat,
    Unsat,
    /// Search was aborted by a terminator or an interrupt
    Interrupted,
}

impl fmt::Display for SolverResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverResult::Sat => write!(f, "SATISFIABLE"),
            SolverResult::Unsat => write!(f, "UNSATISFIABLE"),
            SolverResult::Interrupted => write!(f, "UNKNOWN"),
        }
    }
}

/// Coarse solver state, used in state errors
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverState {
    Input,
    Sat,
    Unsat,
    Interrupted,
}

impl fmt::Display for SolverState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SolverState::Input => "input",
            SolverState::Sat => "sat",
            SolverState::Unsat => "unsat",
            SolverState::Interrupted => "interrupted",
        };
        write!(f, "{name}")
    }
}

#[derive(Error, Debug)]
pub enum SolverError {
    #[error("operation requires solver state `{required}`, but the solver is in state `{actual}`")]
    State {
        required: SolverState,
        actual: SolverState,
    },
    #[error("failed to run solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver output violates the protocol: {0}")]
    Protocol(String),
}

/// Basic solving capability
pub trait Solve {
    /// Name and version of the solver
    fn signature(&self) -> String;

    fn add_clause(&mut self, cl: Clause) -> Result<(), SolverError>;

    fn add_cnf(&mut self, cnf: Cnf) -> Result<(), SolverError> {
        cnf.into_iter().try_for_each(|cl| self.add_clause(cl))
    }

    fn solve(&mut self) -> Result<SolverResult, SolverError>;

    /// The value of a literal in the last model. Only valid after a
    /// [`SolverResult::Sat`] result and before the next clause is added.
    /// Variables the solver did not need to assign are `DontCare`.
    fn lit_val(&self, lit: Lit) -> Result<TernaryVal, SolverError>;

    fn var_val(&self, var: Var) -> Result<TernaryVal, SolverError> {
        self.lit_val(var.pos_lit())
    }

    /// The highest variable in any added clause
    fn max_var(&self) -> Option<Var>;

    /// The last model over variables up to `high_var`
    fn solution(&self, high_var: Var) -> Result<Assignment, SolverError> {
        let mut assign = Assignment::with_vars(high_var.idx() + 1);
        for idx in 0..=high_var.idx32() {
            let var = Var::new(idx);
            assign.assign_var(var, self.var_val(var)?);
        }
        Ok(assign)
    }

    /// The last model over all variables, with `DontCare` completed to false
    fn full_solution(&self) -> Result<Assignment, SolverError> {
        match self.max_var() {
            None => Ok(Assignment::new()),
            Some(var) => Ok(self.solution(var)?.complete()),
        }
    }
}

/// Solving under assumptions and core extraction
pub trait SolveIncremental: Solve {
    /// Solves with the assumptions forced true for this call only
    fn solve_assumps(&mut self, assumps: &[Lit]) -> Result<SolverResult, SolverError>;

    /// After an [`SolverResult::Unsat`] result of
    /// [`SolveIncremental::solve_assumps`], a subset of the assumptions that
    /// is inconsistent with the clauses. Minimality is not guaranteed.
    fn core(&mut self) -> Result<Vec<Lit>, SolverError>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlSignal {
    Continue,
    Terminate,
}

/// Callback polled during search that can abort it
pub trait Terminate {
    fn attach_terminator(&mut self, cb: Box<dyn FnMut() -> ControlSignal + Send>);
    fn detach_terminator(&mut self);
}

/// Handle that aborts a running search from another thread
pub trait InterruptSolver: Send + Sync {
    fn interrupt(&self);
}

/// Asynchronous abort
pub trait Interrupt {
    type Interrupter: InterruptSolver + 'static;
    fn interrupter(&self) -> Self::Interrupter;
}

/// Callback receiving learned clauses up to a length limit
pub trait Learn {
    fn attach_learner(&mut self, cb: Box<dyn FnMut(Clause) + Send>, max_len: usize);
    fn detach_learner(&mut self);
}

/// Preferred decision polarity
pub trait PhaseLit {
    /// Decisions on the literal's variable pick the literal's polarity
    fn phase_lit(&mut self, lit: Lit) -> Result<(), SolverError>;
    fn unphase_var(&mut self, var: Var) -> Result<(), SolverError>;
}

/// Protection of variables from elimination by preprocessing
pub trait FreezeVar {
    fn freeze_var(&mut self, var: Var) -> Result<(), SolverError>;
    fn melt_var(&mut self, var: Var) -> Result<(), SolverError>;
    fn is_frozen(&mut self, var: Var) -> Result<bool, SolverError>;
}

/// Flipping literals in a model without invalidating it
pub trait FlipLit {
    /// Flips the literal if the model stays valid. Returns whether it did.
    fn flip_lit(&mut self, lit: Lit) -> Result<bool, SolverError>;
    fn is_flippable(&mut self, lit: Lit) -> Result<bool, SolverError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagateResult {
    pub propagated: Vec<Lit>,
    pub conflict: bool,
}

/// Unit propagation of assumptions without search
pub trait Propagate {
    fn propagate(&mut self, assumps: &[Lit], phase_saving: bool) -> Result<PropagateResult, SolverError>;
}

pub trait LimitConflicts {
    /// Limits the conflicts of the next solve call, `None` lifts the limit
    fn limit_conflicts(&mut self, limit: Option<u32>) -> Result<(), SolverError>;
}

pub trait LimitDecisions {
    fn limit_decisions(&mut self, limit: Option<u32>) -> Result<(), SolverError>;
}

pub trait LimitPropagations {
    fn limit_propagations(&mut self, limit: Option<u32>) -> Result<(), SolverError>;
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolverStats {
    pub n_sat: usize,
    pub n_unsat: usize,
    pub n_terminated: usize,
    pub n_clauses: usize,
    pub max_var: Option<Var>,
    pub avg_clause_len: f32,
    pub cpu_solve_time: Duration,
}

pub trait SolveStats {
    fn stats(&self) -> SolverStats;
}

/// Search counters of the solver backend
pub trait GetInternalStats {
    fn propagations(&self) -> usize;
    fn decisions(&self) -> usize;
    fn conflicts(&self) -> usize;
}
