//! Model enumeration with blocking clauses over all instance variables

use satkit::{
    instances::SatInstance,
    solvers::{Solve, SolverError, SolverResult},
    types::{Assignment, Clause, Var},
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Summary {
    pub n_models: usize,
    /// Whether the last solve call proved that no further model exists
    pub exhaustive: bool,
}

/// Enumerates total models of a clausal instance. Each model is completed
/// over all `inst.n_vars()` variables and handed to `on_model` before it is
/// blocked. Stops after `limit` models.
pub fn enumerate<S, F>(inst: &SatInstance, solver: &mut S, limit: Option<usize>, mut on_model: F) -> Result<Summary, SolverError>
where
    S: Solve,
    F: FnMut(&Assignment),
{
    assert!(inst.n_cards() + inst.n_pbs() == 0, "instance must be clausal");
    let n_vars = inst.n_vars();
    for cl in inst.cnf() {
        solver.add_clause(cl.clone())?;
    }
    let mut n_models = 0;
    loop {
        if limit.is_some_and(|l| n_models >= l) {
            return Ok(Summary {
                n_models,
                exhaustive: false,
            });
        }
        match solver.solve()? {
            SolverResult::Sat => {}
            SolverResult::Unsat => {
                return Ok(Summary {
                    n_models,
                    exhaustive: true,
                })
            }
            SolverResult::Interrupted => {
                return Ok(Summary {
                    n_models,
                    exhaustive: false,
                })
            }
        }
        let model = if n_vars == 0 {
            Assignment::new()
        } else {
            solver.solution(Var::new(n_vars - 1))?.complete()
        };
        n_models += 1;
        on_model(&model);
        let blocking: Clause = model.iter().map(|l| !l).collect();
        solver.add_clause(blocking)?;
    }
}

/// Formats a model as a `v` line
pub fn v_line(model: &Assignment) -> String {
    let mut line = String::from("v");
    for lit in model.iter() {
        line.push(' ');
        line.push_str(&lit.to_ipasir().to_string());
    }
    line.push_str(" 0");
    line
}
