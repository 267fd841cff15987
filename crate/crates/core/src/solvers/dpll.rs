//! A small DPLL solver with two watched literals and chronological
//! backtracking. Each solve call starts from an empty trail.

use std::{
    sync::{
        atomic::{AtomicBool, Ordering},
        Arc,
    },
    time::Instant,
};

use crate::types::{constraints::Sanitized, Clause, Lit, TernaryVal, Var};

use super::{
    ControlSignal, GetInternalStats, Interrupt, InterruptSolver, PhaseLit, Solve, SolveIncremental, SolveStats,
    SolverError, SolverResult, SolverState, SolverStats, Terminate,
};

const POLL_PROPAGATIONS: usize = 4096;

type Terminator = Box<dyn FnMut() -> ControlSignal + Send>;

enum State {
    Input,
    Sat(Vec<TernaryVal>),
    Unsat(Vec<Lit>),
    Interrupted,
}

impl State {
    fn coarse(&self) -> SolverState {
        match self {
            State::Input => SolverState::Input,
            State::Sat(_) => SolverState::Sat,
            State::Unsat(_) => SolverState::Unsat,
            State::Interrupted => SolverState::Interrupted,
        }
    }
}

struct Level {
    trail_start: usize,
    decision: Lit,
    flipped: bool,
}

/// Reference solver. Complete, incremental through assumptions, and slow on
/// anything but small instances.
pub struct DpllSolver {
    clauses: Vec<Vec<Lit>>,
    units: Vec<Lit>,
    has_empty: bool,
    n_lits_added: usize,
    n_clauses_added: usize,
    max_var: Option<Var>,
    occurs: Vec<bool>,
    phases: Vec<Option<bool>>,
    watches: Vec<Vec<usize>>,

    vals: Vec<TernaryVal>,
    reasons: Vec<Option<usize>>,
    trail: Vec<Lit>,
    levels: Vec<Level>,
    qhead: usize,

    state: State,
    terminator: Option<Terminator>,
    interrupted: Arc<AtomicBool>,
    stats: SolverStats,
    propagations: usize,
    decisions: usize,
    conflicts: usize,
    since_poll: usize,
}

impl Default for DpllSolver {
    fn default() -> Self {
        DpllSolver {
            clauses: vec![],
            units: vec![],
            has_empty: false,
            n_lits_added: 0,
            n_clauses_added: 0,
            max_var: None,
            occurs: vec![],
            phases: vec![],
            watches: vec![],
            vals: vec![],
            reasons: vec![],
            trail: vec![],
            levels: vec![],
            qhead: 0,
            state: State::Input,
            terminator: None,
            interrupted: Arc::new(AtomicBool::new(false)),
            stats: SolverStats::default(),
            propagations: 0,
            decisions: 0,
            conflicts: 0,
            since_poll: 0,
        }
    }
}

enum Search {
    Done(SolverResult),
    Core(Vec<Lit>),
}

impl DpllSolver {
    pub fn new() -> Self {
        Self::default()
    }

    fn reserve(&mut self, var: Var) {
        let n = var.idx() + 1;
        if self.vals.len() < n {
            self.vals.resize(n, TernaryVal::DontCare);
            self.reasons.resize(n, None);
            self.occurs.resize(n, false);
            self.phases.resize(n, None);
            self.watches.resize(2 * n, vec![]);
        }
    }

    fn val(&self, lit: Lit) -> TernaryVal {
        let val = self.vals[lit.vidx()];
        if lit.is_neg() {
            !val
        } else {
            val
        }
    }

    fn assign(&mut self, lit: Lit, reason: Option<usize>) {
        self.vals[lit.vidx()] = TernaryVal::from(lit.is_pos());
        self.reasons[lit.vidx()] = reason;
        self.trail.push(lit);
    }

    fn backtrack(&mut self, n_levels: usize) {
        let start = self.levels[n_levels].trail_start;
        for lit in self.trail.drain(start..) {
            self.vals[lit.vidx()] = TernaryVal::DontCare;
            self.reasons[lit.vidx()] = None;
        }
        self.levels.truncate(n_levels);
        self.qhead = self.qhead.min(start);
    }

    fn reset(&mut self) {
        if !self.levels.is_empty() {
            self.backtrack(0);
        }
        for lit in self.trail.drain(..) {
            self.vals[lit.vidx()] = TernaryVal::DontCare;
            self.reasons[lit.vidx()] = None;
        }
        self.qhead = 0;
    }

    fn should_stop(&mut self) -> bool {
        if self.interrupted.swap(false, Ordering::Relaxed) {
            return true;
        }
        match &mut self.terminator {
            Some(cb) => cb() == ControlSignal::Terminate,
            None => false,
        }
    }

    /// Returns the index of a conflicting clause
    fn propagate(&mut self) -> Result<Option<usize>, ()> {
        while self.qhead < self.trail.len() {
            let falsified = !self.trail[self.qhead];
            self.qhead += 1;
            self.propagations += 1;
            self.since_poll += 1;
            if self.since_poll >= POLL_PROPAGATIONS {
                self.since_poll = 0;
                if self.should_stop() {
                    return Err(());
                }
            }
            let mut watchers = std::mem::take(&mut self.watches[falsified.raw() as usize]);
            let mut idx = 0;
            let mut conflict = None;
            while idx < watchers.len() {
                let cidx = watchers[idx];
                let cl = &mut self.clauses[cidx];
                if cl[0] == falsified {
                    cl.swap(0, 1);
                }
                let other = cl[0];
                if self.val(other) == TernaryVal::True {
                    idx += 1;
                    continue;
                }
                let cl = &self.clauses[cidx];
                let replacement = (2..cl.len()).find(|&k| self.val(cl[k]) != TernaryVal::False);
                if let Some(k) = replacement {
                    let cl = &mut self.clauses[cidx];
                    cl.swap(1, k);
                    let new_watch = cl[1];
                    self.watches[new_watch.raw() as usize].push(cidx);
                    watchers.swap_remove(idx);
                    continue;
                }
                if self.val(other) == TernaryVal::False {
                    conflict = Some(cidx);
                    break;
                }
                self.assign(other, Some(cidx));
                idx += 1;
            }
            let slot = &mut self.watches[falsified.raw() as usize];
            watchers.append(slot);
            *slot = watchers;
            if conflict.is_some() {
                return Ok(conflict);
            }
        }
        Ok(None)
    }

    /// The assumptions on the trail that imply the marked variables
    fn analyze_final(&self, mut seen: Vec<bool>) -> Vec<Lit> {
        let mut core = vec![];
        let first_assump = self.levels.first().map_or(usize::MAX, |lvl| lvl.trail_start);
        for (pos, &lit) in self.trail.iter().enumerate().rev() {
            if !seen[lit.vidx()] {
                continue;
            }
            match self.reasons[lit.vidx()] {
                Some(cidx) => {
                    for &other in &self.clauses[cidx] {
                        seen[other.vidx()] = true;
                    }
                }
                None if pos >= first_assump => core.push(lit),
                None => {}
            }
        }
        core
    }

    fn search(&mut self, assumps: &[Lit]) -> Search {
        if self.has_empty {
            return Search::Core(vec![]);
        }
        for lit in self.units.clone() {
            match self.val(lit) {
                TernaryVal::True => {}
                TernaryVal::False => return Search::Core(vec![]),
                TernaryVal::DontCare => self.assign(lit, None),
            }
        }
        match self.propagate() {
            Err(()) => return Search::Done(SolverResult::Interrupted),
            Ok(Some(_)) => return Search::Core(vec![]),
            Ok(None) => {}
        }

        for &a in assumps {
            self.levels.push(Level {
                trail_start: self.trail.len(),
                decision: a,
                flipped: false,
            });
            match self.val(a) {
                TernaryVal::True => continue,
                TernaryVal::False => {
                    let mut seen = vec![false; self.vals.len()];
                    seen[a.vidx()] = true;
                    let mut core = self.analyze_final(seen);
                    core.push(a);
                    return Search::Core(core);
                }
                TernaryVal::DontCare => self.assign(a, None),
            }
            match self.propagate() {
                Err(()) => return Search::Done(SolverResult::Interrupted),
                Ok(Some(cidx)) => {
                    let mut seen = vec![false; self.vals.len()];
                    for &lit in &self.clauses[cidx] {
                        seen[lit.vidx()] = true;
                    }
                    return Search::Core(self.analyze_final(seen));
                }
                Ok(None) => {}
            }
        }

        let base = self.levels.len();
        let mut next_var = 0;
        loop {
            match self.propagate() {
                Err(()) => return Search::Done(SolverResult::Interrupted),
                Ok(Some(_)) => {
                    self.conflicts += 1;
                    if self.should_stop() {
                        return Search::Done(SolverResult::Interrupted);
                    }
                    while self.levels.len() > base && self.levels.last().unwrap().flipped {
                        self.backtrack(self.levels.len() - 1);
                    }
                    if self.levels.len() == base {
                        return Search::Core(assumps.to_vec());
                    }
                    let decision = self.levels.last().unwrap().decision;
                    self.backtrack(self.levels.len() - 1);
                    self.levels.push(Level {
                        trail_start: self.trail.len(),
                        decision: !decision,
                        flipped: true,
                    });
                    self.assign(!decision, None);
                    next_var = 0;
                }
                Ok(None) => {
                    while next_var < self.vals.len()
                        && (!self.occurs[next_var] || self.vals[next_var] != TernaryVal::DontCare)
                    {
                        next_var += 1;
                    }
                    if next_var == self.vals.len() {
                        return Search::Done(SolverResult::Sat);
                    }
                    self.decisions += 1;
                    let var = Var::new(next_var as u32);
                    let lit = var.lit(!self.phases[next_var].unwrap_or(false));
                    self.levels.push(Level {
                        trail_start: self.trail.len(),
                        decision: lit,
                        flipped: false,
                    });
                    self.assign(lit, None);
                }
            }
        }
    }

    fn run(&mut self, assumps: &[Lit]) -> SolverResult {
        let start = Instant::now();
        for &a in assumps {
            self.reserve(a.var());
        }
        self.reset();
        let outcome = self.search(assumps);
        let res = match outcome {
            Search::Done(SolverResult::Sat) => {
                self.state = State::Sat(self.vals.clone());
                self.stats.n_sat += 1;
                SolverResult::Sat
            }
            Search::Done(_) => {
                self.state = State::Interrupted;
                self.stats.n_terminated += 1;
                SolverResult::Interrupted
            }
            Search::Core(mut core) => {
                core.sort_unstable();
                core.dedup();
                self.state = State::Unsat(core);
                self.stats.n_unsat += 1;
                SolverResult::Unsat
            }
        };
        self.reset();
        self.stats.cpu_solve_time += start.elapsed();
        res
    }
}

impl Solve for DpllSolver {
    fn signature(&self) -> String {
        format!("dpll-{}", env!("CARGO_PKG_VERSION"))
    }

    fn add_clause(&mut self, cl: Clause) -> Result<(), SolverError> {
        self.state = State::Input;
        self.n_clauses_added += 1;
        self.n_lits_added += cl.len();
        if let Some(var) = cl.max_var() {
            self.reserve(var);
            self.max_var = self.max_var.max(Some(var));
        }
        for &lit in cl.iter() {
            self.occurs[lit.vidx()] = true;
        }
        let lits = match cl.sanitize() {
            Sanitized::Tautology => return Ok(()),
            Sanitized::Clause(cl) => cl.into_lits(),
        };
        match lits.len() {
            0 => self.has_empty = true,
            1 => self.units.push(lits[0]),
            _ => {
                let cidx = self.clauses.len();
                self.watches[lits[0].raw() as usize].push(cidx);
                self.watches[lits[1].raw() as usize].push(cidx);
                self.clauses.push(lits);
            }
        }
        Ok(())
    }

    fn solve(&mut self) -> Result<SolverResult, SolverError> {
        Ok(self.run(&[]))
    }

    fn lit_val(&self, lit: Lit) -> Result<TernaryVal, SolverError> {
        match &self.state {
            State::Sat(vals) => {
                let val = vals.get(lit.vidx()).copied().unwrap_or(TernaryVal::DontCare);
                Ok(if lit.is_neg() { !val } else { val })
            }
            other => Err(SolverError::State {
                required: SolverState::Sat,
                actual: other.coarse(),
            }),
        }
    }

    fn max_var(&self) -> Option<Var> {
        self.max_var
    }
}

impl SolveIncremental for DpllSolver {
    fn solve_assumps(&mut self, assumps: &[Lit]) -> Result<SolverResult, SolverError> {
        Ok(self.run(assumps))
    }

    fn core(&mut self) -> Result<Vec<Lit>, SolverError> {
        match &self.state {
            State::Unsat(core) => Ok(core.clone()),
            other => Err(SolverError::State {
                required: SolverState::Unsat,
                actual: other.coarse(),
            }),
        }
    }
}

impl Terminate for DpllSolver {
    fn attach_terminator(&mut self, cb: Box<dyn FnMut() -> ControlSignal + Send>) {
        self.terminator = Some(cb);
    }

    fn detach_terminator(&mut self) {
        self.terminator = None;
    }
}

/// Interrupts a [`DpllSolver`] from another thread. The next solve call
/// clears a pending interrupt once it has acted on it.
#[derive(Clone)]
pub struct DpllInterrupter(Arc<AtomicBool>);

impl InterruptSolver for DpllInterrupter {
    fn interrupt(&self) {
        self.0.store(true, Ordering::Relaxed);
    }
}

impl Interrupt for DpllSolver {
    type Interrupter = DpllInterrupter;

    fn interrupter(&self) -> DpllInterrupter {
        DpllInterrupter(Arc::clone(&self.interrupted))
    }
}

impl PhaseLit for DpllSolver {
    fn phase_lit(&mut self, lit: Lit) -> Result<(), SolverError> {
        self.reserve(lit.var());
        self.phases[lit.vidx()] = Some(lit.is_pos());
        Ok(())
    }

    fn unphase_var(&mut self, var: Var) -> Result<(), SolverError> {
        if let Some(phase) = self.phases.get_mut(var.idx()) {
            *phase = None;
        }
        Ok(())
    }
}

impl SolveStats for DpllSolver {
    fn stats(&self) -> SolverStats {
        let mut stats = self.stats.clone();
        stats.n_clauses = self.n_clauses_added;
        stats.max_var = self.max_var;
        stats.avg_clause_len = if self.n_clauses_added == 0 {
            0.
        } else {
            self.n_lits_added as f32 / self.n_clauses_added as f32
        };
        stats
    }
}

impl GetInternalStats for DpllSolver {
    fn propagations(&self) -> usize {
        self.propagations
    }

    fn decisions(&self) -> usize {
        self.decisions
    }

    fn conflicts(&self) -> usize {
        self.conflicts
    }
}
