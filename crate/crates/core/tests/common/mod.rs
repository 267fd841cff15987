#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use satkit::{
    solvers::{DpllSolver, Solve, SolveIncremental, SolverResult},
    types::{Clause, Lit, Var},
};

pub fn pos_lits(n: u32) -> Vec<Lit> {
    (0..n).map(Lit::positive).collect()
}

/// All `2^n` assignments of the given literals, as cubes of true literals
pub fn cubes(lits: &[Lit]) -> impl Iterator<Item = Vec<Lit>> + '_ {
    (0u64..1 << lits.len()).map(move |bits| {
        lits.iter()
            .enumerate()
            .map(|(i, &l)| if bits >> i & 1 == 1 { l } else { !l })
            .collect()
    })
}

/// Number of literals of `lits` that are true in `cube`
pub fn count_true(lits: &[Lit], cube: &[Lit]) -> usize {
    lits.iter().filter(|l| cube.contains(l)).count()
}

pub fn weight_true(terms: &[(Lit, usize)], cube: &[Lit]) -> usize {
    terms.iter().filter(|(l, _)| cube.contains(l)).map(|&(_, w)| w).sum()
}

/// Decides whether a cube extends to a model of a clause set
pub struct Extension {
    solver: DpllSolver,
}

impl Extension {
    pub fn new<'a, I: IntoIterator<Item = &'a Clause>>(clauses: I) -> Self {
        let mut solver = DpllSolver::new();
        for cl in clauses {
            solver.add_clause(cl.clone()).unwrap();
        }
        Extension { solver }
    }

    pub fn sat(&mut self, assumps: &[Lit]) -> bool {
        match self.solver.solve_assumps(assumps).unwrap() {
            SolverResult::Sat => true,
            SolverResult::Unsat => false,
            SolverResult::Interrupted => panic!("reference solver interrupted"),
        }
    }
}

/// Truth-table satisfiability check, independent of any solver
pub fn brute_force_sat(clauses: &[Clause], n_vars: u32, fixed: &[Lit]) -> bool {
    (0u64..1 << n_vars).any(|bits| {
        let val = |l: Lit| (bits >> l.var().idx() & 1 == 1) != l.is_neg();
        fixed.iter().all(|&l| val(l)) && clauses.iter().all(|cl| cl.iter().any(|&l| val(l)))
    })
}

/// Iterated pure-literal elimination. Variables in `frozen` are never
/// considered pure. Returns the number of removed clauses.
pub fn pure_literal_removals(clauses: &[Clause], frozen: &HashSet<Var>) -> usize {
    let mut alive = vec![true; clauses.len()];
    let mut removed = 0;
    loop {
        let mut polarity: HashMap<Var, (bool, bool)> = HashMap::new();
        for (cl, _) in clauses.iter().zip(&alive).filter(|(_, &a)| a) {
            for l in cl.iter() {
                let entry = polarity.entry(l.var()).or_default();
                if l.is_pos() {
                    entry.0 = true;
                } else {
                    entry.1 = true;
                }
            }
        }
        let pure = |l: &Lit| {
            let (p, n) = polarity[&l.var()];
            !frozen.contains(&l.var()) && p != n
        };
        let mut changed = false;
        for (cl, a) in clauses.iter().zip(alive.iter_mut()) {
            if *a && cl.iter().any(pure) {
                *a = false;
                removed += 1;
                changed = true;
            }
        }
        if !changed {
            return removed;
        }
    }
}
