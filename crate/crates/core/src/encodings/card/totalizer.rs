//! Incremental totalizer over a balanced binary tree

use std::{collections::HashSet, ops::RangeBounds};

use crate::{
    encodings::{
        inclusive,
        totdb::{NodeCon, NodeId, TotDb},
        CollectClauses, EncodeStats, Error, Falsity, StatsGuard,
    },
    instances::ManageVars,
    types::Lit,
};

use super::{BoundLower, BoundUpper, Encode};

/// Totalizer cardinality encoding.
///
/// Inputs added after an encode call are built into a separate balanced
/// subtree that is merged with the previous root on the next encode.
#[derive(Clone, Debug, Default)]
pub struct Totalizer {
    db: TotDb,
    root: Option<NodeId>,
    lits: Vec<Lit>,
    n_encoded: usize,
    falsity: Falsity,
    n_clauses: usize,
    n_vars: u32,
}

impl Totalizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// The input literals in insertion order
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    fn n_pending(&self) -> usize {
        self.lits.len() - self.n_encoded
    }

    fn build_pending(&mut self) -> Result<(), Error> {
        if self.n_pending() == 0 {
            return Ok(());
        }
        let seen: HashSet<Lit> = self.lits.iter().copied().collect();
        if seen.iter().any(|&l| seen.contains(&!l)) {
            return Err(Error::ComplementaryInputs);
        }
        let sub = self.db.tree(&self.lits[self.n_encoded..]).unwrap();
        self.root = Some(match self.root {
            None => sub,
            Some(old) => self.db.internal(NodeCon::full(old), NodeCon::full(sub)),
        });
        self.n_encoded = self.lits.len();
        Ok(())
    }
}

impl FromIterator<Lit> for Totalizer {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        Totalizer {
            lits: iter.into_iter().collect(),
            ..Default::default()
        }
    }
}

impl Extend<Lit> for Totalizer {
    fn extend<I: IntoIterator<Item = Lit>>(&mut self, iter: I) {
        self.lits.extend(iter)
    }
}

impl Encode for Totalizer {
    fn n_lits(&self) -> usize {
        self.lits.len()
    }
}

impl BoundUpper for Totalizer {
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let n = self.lits.len();
        let Some((lo, hi)) = inclusive(&range, n) else {
            return Ok(());
        };
        if lo >= n {
            return Ok(());
        }
        let guard = StatsGuard::start(col, vm);
        self.build_pending()?;
        let root = self.root.unwrap();
        for k in lo..=hi.min(n - 1) {
            self.db.define_ub(root, k + 1, col, vm);
        }
        guard.finish(col, vm, &mut self.n_clauses, &mut self.n_vars);
        Ok(())
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        if ub >= self.lits.len() {
            return Ok(vec![]);
        }
        if self.n_pending() > 0 {
            return Err(Error::NotEncoded);
        }
        let root = self.root.unwrap();
        if !self.db.ub_defined(root, ub + 1) {
            return Err(Error::NotEncoded);
        }
        Ok(vec![!self.db.out(root, ub + 1).unwrap()])
    }
}

impl BoundLower for Totalizer {
    fn encode_lb<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let n = self.lits.len();
        let Some((lo, hi)) = inclusive(&range, n) else {
            return Ok(());
        };
        let guard = StatsGuard::start(col, vm);
        if hi > n {
            self.falsity.ensure(col, vm);
        }
        if lo.max(1) <= hi.min(n) {
            self.build_pending()?;
            let root = self.root.unwrap();
            for k in lo.max(1)..=hi.min(n) {
                self.db.define_lb(root, k, col, vm);
            }
        }
        guard.finish(col, vm, &mut self.n_clauses, &mut self.n_vars);
        Ok(())
    }

    fn enforce_lb(&self, lb: usize) -> Result<Vec<Lit>, Error> {
        if lb == 0 {
            return Ok(vec![]);
        }
        if lb > self.lits.len() {
            return self.falsity.assumps();
        }
        if self.n_pending() > 0 {
            return Err(Error::NotEncoded);
        }
        let root = self.root.unwrap();
        if !self.db.lb_defined(root, lb) {
            return Err(Error::NotEncoded);
        }
        Ok(vec![self.db.out(root, lb).unwrap()])
    }
}

impl EncodeStats for Totalizer {
    fn n_clauses(&self) -> usize {
        self.n_clauses
    }

    fn n_vars(&self) -> u32 {
        self.n_vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{encodings::ClauseCounter, instances::BasicVarManager, lit, var};

    fn tot(n: u32) -> (Totalizer, BasicVarManager) {
        let enc: Totalizer = (0..n).map(|i| lit![i]).collect();
        (enc, BasicVarManager::from_next_free(var![n]))
    }

    #[test]
    fn trivial_bound_is_free() {
        let (mut enc, mut vm) = tot(3);
        let mut col = ClauseCounter::default();
        enc.encode_ub(3..=3, &mut col, &mut vm).unwrap();
        assert_eq!(col.n_clauses, 0);
        assert_eq!(enc.enforce_ub(3), Ok(vec![]));
    }

    #[test]
    fn not_encoded() {
        let (mut enc, mut vm) = tot(4);
        let mut col = ClauseCounter::default();
        assert_eq!(enc.enforce_ub(1), Err(Error::NotEncoded));
        enc.encode_ub(1..=1, &mut col, &mut vm).unwrap();
        assert!(enc.enforce_ub(1).is_ok());
        assert_eq!(enc.enforce_ub(2), Err(Error::NotEncoded));
        enc.extend([lit![10]]);
        assert_eq!(enc.enforce_ub(1), Err(Error::NotEncoded));
        assert_eq!(enc.enforce_lb(0), Ok(vec![]));
    }

    #[test]
    fn incremental_count_matches_scratch() {
        let (mut inc, mut vm) = tot(2);
        let mut col = ClauseCounter::default();
        inc.encode_ub(1..=1, &mut col, &mut vm).unwrap();
        inc.extend([lit![2]]);
        inc.encode_ub(1..=1, &mut col, &mut vm).unwrap();
        let (mut scratch, mut vm2) = tot(3);
        let mut col2 = ClauseCounter::default();
        scratch.encode_ub(1..=1, &mut col2, &mut vm2).unwrap();
        assert_eq!(col.n_clauses, col2.n_clauses);
        assert_eq!(inc.n_clauses(), col.n_clauses);
    }

    #[test]
    fn complementary_inputs() {
        let mut enc: Totalizer = [lit![0], !lit![0]].into_iter().collect();
        let mut vm = BasicVarManager::from_next_free(var![1]);
        let mut col = ClauseCounter::default();
        assert_eq!(enc.encode_ub(0..=1, &mut col, &mut vm), Err(Error::ComplementaryInputs));
    }

    #[test]
    fn impossible_lb() {
        let (mut enc, mut vm) = tot(3);
        let mut cls = Vec::new();
        assert_eq!(enc.enforce_lb(4), Err(Error::NotEncoded));
        enc.encode_lb(4..=4, &mut cls, &mut vm).unwrap();
        let assumps = enc.enforce_lb(4).unwrap();
        assert_eq!(assumps.len(), 1);
        assert_eq!(cls, vec![crate::types::Clause::from([!assumps[0]])]);
    }
}
