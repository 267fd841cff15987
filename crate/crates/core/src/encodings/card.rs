//! # Cardinality Encodings
//!
//! Incremental encodings of `sum(lits) <= k` and `sum(lits) >= k`.

use std::ops::RangeBounds;

use crate::{
    encodings::{CollectClauses, Error},
    instances::ManageVars,
    types::{Clause, Lit},
};

mod simulators;
mod totalizer;

pub use simulators::{Double, Inverted};
pub use totalizer::Totalizer;

/// Encoders over a sequence of input literals
pub trait Encode: Extend<Lit> {
    /// The number of input literals, including ones not yet encoded
    fn n_lits(&self) -> usize;
}

/// Encoders for upper bounds
pub trait BoundUpper: Encode {
    /// Encodes all upper bounds in `range` so that they can be enforced
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, var_manager: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>;

    /// Assumptions enforcing `sum(lits) <= ub`
    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error>;

    /// Encodes `ub` and permanently asserts it with unit clauses
    fn assert_ub<Col: CollectClauses>(
        &mut self,
        ub: usize,
        col: &mut Col,
        var_manager: &mut dyn ManageVars,
    ) -> Result<(), Error> {
        self.encode_ub(ub..=ub, col, var_manager)?;
        for lit in self.enforce_ub(ub)? {
            col.add_clause(Clause::from([lit]));
        }
        Ok(())
    }
}

/// Encoders for lower bounds
pub trait BoundLower: Encode {
    /// Encodes all lower bounds in `range` so that they can be enforced
    fn encode_lb<Col, R>(&mut self, range: R, col: &mut Col, var_manager: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>;

    /// Assumptions enforcing `sum(lits) >= lb`
    fn enforce_lb(&self, lb: usize) -> Result<Vec<Lit>, Error>;

    /// Encodes `lb` and permanently asserts it with unit clauses
    fn assert_lb<Col: CollectClauses>(
        &mut self,
        lb: usize,
        col: &mut Col,
        var_manager: &mut dyn ManageVars,
    ) -> Result<(), Error> {
        self.encode_lb(lb..=lb, col, var_manager)?;
        for lit in self.enforce_lb(lb)? {
            col.add_clause(Clause::from([lit]));
        }
        Ok(())
    }
}

/// Encoders for both bound directions
pub trait BoundBoth: BoundUpper + BoundLower {
    fn encode_both<Col, R>(&mut self, range: R, col: &mut Col, var_manager: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize> + Clone,
    {
        self.encode_ub(range.clone(), col, var_manager)?;
        self.encode_lb(range, col, var_manager)
    }

    /// Assumptions enforcing `lb <= sum(lits) <= ub`
    fn enforce_eq(&self, lb: usize, ub: usize) -> Result<Vec<Lit>, Error> {
        let mut assumps = self.enforce_lb(lb)?;
        assumps.extend(self.enforce_ub(ub)?);
        Ok(assumps)
    }
}

impl<E: BoundUpper + BoundLower> BoundBoth for E {}
