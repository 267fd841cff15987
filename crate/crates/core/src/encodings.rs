//! # Constraint Encodings
//!
//! CNF encodings for at-most-one ([`am1`]), cardinality ([`card`]) and
//! pseudo-Boolean ([`pb`]) constraints.
//!
//! Cardinality and pseudo-Boolean encoders are incremental: inputs can be
//! added with [`Extend`] and bounds can be encoded range by range. Every
//! `encode_*` call emits only clauses that have not been emitted before.
//! Bounds are enforced via assumptions returned by `enforce_*`, which makes
//! them retractable.
//!
//! All encoders follow the cone-of-influence strategy: only output literals
//! needed to enforce a requested bound are defined, so the emitted clauses
//! contain no pure auxiliary literals.

use std::ops::{Bound, RangeBounds};

use thiserror::Error;

use crate::{
    instances::ManageVars,
    types::{Clause, Lit},
};

pub mod am1;
pub mod card;
pub mod pb;
mod totdb;

/// Errors from encoders
#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// The bound to enforce has not been encoded. Call the matching
    /// `encode_*` method first.
    #[error("the requested bound has not been encoded")]
    NotEncoded,
    /// The encoder does not support the requested operation
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
    /// A literal and its negation are both inputs to a cardinality encoder
    #[error("a literal and its negation are both inputs of the encoding")]
    ComplementaryInputs,
}

/// Sink receiving the clauses an encoder emits
pub trait CollectClauses {
    /// The number of clauses collected so far
    fn n_clauses(&self) -> usize;

    fn add_clause(&mut self, cl: Clause);

    fn extend_clauses<T: IntoIterator<Item = Clause>>(&mut self, cls: T) {
        cls.into_iter().for_each(|cl| self.add_clause(cl));
    }
}

impl CollectClauses for Vec<Clause> {
    fn n_clauses(&self) -> usize {
        self.len()
    }

    fn add_clause(&mut self, cl: Clause) {
        self.push(cl);
    }
}

/// Collector that only counts clauses and their literals
#[derive(Default, Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClauseCounter {
    pub n_clauses: usize,
    pub n_lits: usize,
}

impl CollectClauses for ClauseCounter {
    fn n_clauses(&self) -> usize {
        self.n_clauses
    }

    fn add_clause(&mut self, cl: Clause) {
        self.n_clauses += 1;
        self.n_lits += cl.len();
    }
}

/// Size statistics of an encoding
pub trait EncodeStats {
    /// Number of clauses emitted over the lifetime of the encoder
    fn n_clauses(&self) -> usize;

    /// Number of auxiliary variables allocated over the lifetime of the encoder
    fn n_vars(&self) -> u32;
}

/// Converts range bounds into an inclusive pair, `None` if the range is empty.
/// An unbounded end is replaced by `max`.
pub(crate) fn inclusive<R: RangeBounds<usize>>(range: &R, max: usize) -> Option<(usize, usize)> {
    let lo = match range.start_bound() {
        Bound::Included(&b) => b,
        Bound::Excluded(&b) => b.checked_add(1)?,
        Bound::Unbounded => 0,
    };
    let hi = match range.end_bound() {
        Bound::Included(&b) => b,
        Bound::Excluded(&b) => b.checked_sub(1)?,
        Bound::Unbounded => max,
    };
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

/// A literal that is permanently false, used as the assumption enforcing an
/// impossible bound
#[derive(Default, Debug, Clone, Copy)]
pub(crate) struct Falsity(Option<Lit>);

impl Falsity {
    pub fn ensure<Col: CollectClauses>(&mut self, collector: &mut Col, var_manager: &mut dyn ManageVars) {
        if self.0.is_none() {
            let lit = var_manager.new_var().pos_lit();
            collector.add_clause(Clause::from([!lit]));
            self.0 = Some(lit);
        }
    }

    pub fn assumps(&self) -> Result<Vec<Lit>, Error> {
        self.0.map(|l| vec![l]).ok_or(Error::NotEncoded)
    }
}

/// Tracks clause and variable counts across an encode call
pub(crate) struct StatsGuard {
    clauses_before: usize,
    vars_before: u32,
}

impl StatsGuard {
    pub fn start<Col: CollectClauses>(collector: &Col, var_manager: &dyn ManageVars) -> Self {
        StatsGuard {
            clauses_before: collector.n_clauses(),
            vars_before: var_manager.n_used(),
        }
    }

    pub fn finish<Col: CollectClauses>(
        self,
        collector: &Col,
        var_manager: &dyn ManageVars,
        n_clauses: &mut usize,
        n_vars: &mut u32,
    ) {
        *n_clauses += collector.n_clauses() - self.clauses_before;
        *n_vars += var_manager.n_used() - self.vars_before;
    }
}

#[cfg(test)]
mod tests {
    use super::inclusive;

    #[test]
    fn range_conversion() {
        assert_eq!(inclusive(&(1..=3), 10), Some((1, 3)));
        assert_eq!(inclusive(&(1..3), 10), Some((1, 2)));
        assert_eq!(inclusive(&(..), 10), Some((0, 10)));
        assert_eq!(inclusive(&(4..), 10), Some((4, 10)));
        assert_eq!(inclusive(&(3..3), 10), None);
        assert_eq!(inclusive(&(0..0), 10), None);
    }
}
