//! # satkit
//!
//! Building blocks for SAT and MaxSAT tools: literal and constraint types,
//! instance containers, DIMACS and OPB parsers and writers, CNF encodings of
//! cardinality and pseudo-Boolean constraints, and a uniform solver
//! interface.
//!
//! ```
//! use satkit::{clause, lit, solvers::{DpllSolver, Solve, SolverResult}};
//!
//! let mut solver = DpllSolver::new();
//! solver.add_clause(clause![lit![0], !lit![1]]).unwrap();
//! solver.add_clause(clause![lit![1]]).unwrap();
//! assert_eq!(solver.solve().unwrap(), SolverResult::Sat);
//! assert!(solver.lit_val(lit![0]).unwrap().to_bool_with_def(false));
//! ```

pub mod encodings;
pub mod instances;
pub mod io;
pub mod solvers;
pub mod types;
