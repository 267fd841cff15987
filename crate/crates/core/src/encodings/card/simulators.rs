//! Encoders simulated from other encoders

use std::ops::RangeBounds;

use crate::{
    encodings::{inclusive, CollectClauses, EncodeStats, Error, Falsity},
    instances::ManageVars,
    types::Lit,
};

use super::{BoundLower, BoundUpper, Encode};

/// Flips the bound direction of the inner encoder by negating its inputs,
/// using `sum(l) <= k  <=>  sum(!l) >= n - k`
#[derive(Clone, Debug, Default)]
pub struct Inverted<E> {
    inner: E,
    falsity: Falsity,
}

impl<E> Inverted<E> {
    pub fn inner(&self) -> &E {
        &self.inner
    }
}

impl<E: Default + Extend<Lit>> FromIterator<Lit> for Inverted<E> {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        let mut inv = Inverted::<E>::default();
        inv.extend(iter);
        inv
    }
}

impl<E: Extend<Lit>> Extend<Lit> for Inverted<E> {
    fn extend<I: IntoIterator<Item = Lit>>(&mut self, iter: I) {
        self.inner.extend(iter.into_iter().map(|l| !l))
    }
}

impl<E: Encode> Encode for Inverted<E> {
    fn n_lits(&self) -> usize {
        self.inner.n_lits()
    }
}

impl<E: BoundLower> BoundUpper for Inverted<E> {
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let n = self.n_lits();
        match inclusive(&range, n) {
            Some((lo, hi)) if lo < n => self.inner.encode_lb(n - hi.min(n)..=n - lo, col, vm),
            _ => Ok(()),
        }
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        let n = self.n_lits();
        if ub >= n {
            return Ok(vec![]);
        }
        self.inner.enforce_lb(n - ub)
    }
}

impl<E: BoundUpper> BoundLower for Inverted<E> {
    fn encode_lb<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let n = self.n_lits();
        let Some((lo, hi)) = inclusive(&range, n) else {
            return Ok(());
        };
        if hi > n {
            self.falsity.ensure(col, vm);
        }
        if lo.max(1) <= hi.min(n) {
            self.inner.encode_ub(n - hi.min(n)..=n - lo.max(1), col, vm)?;
        }
        Ok(())
    }

    fn enforce_lb(&self, lb: usize) -> Result<Vec<Lit>, Error> {
        let n = self.n_lits();
        if lb == 0 {
            return Ok(vec![]);
        }
        if lb > n {
            return self.falsity.assumps();
        }
        self.inner.enforce_ub(n - lb)
    }
}

impl<E: EncodeStats> EncodeStats for Inverted<E> {
    fn n_clauses(&self) -> usize {
        self.inner.n_clauses() + usize::from(self.falsity.assumps().is_ok())
    }

    fn n_vars(&self) -> u32 {
        self.inner.n_vars() + u32::from(self.falsity.assumps().is_ok())
    }
}

/// Combines an upper-bounding and a lower-bounding encoder over the same inputs
#[derive(Clone, Debug, Default)]
pub struct Double<UB, LB> {
    ub: UB,
    lb: LB,
}

impl<UB, LB> Double<UB, LB> {
    pub fn new(ub: UB, lb: LB) -> Self {
        Double { ub, lb }
    }

    pub fn ub_encoder(&self) -> &UB {
        &self.ub
    }

    pub fn lb_encoder(&self) -> &LB {
        &self.lb
    }
}

impl<UB: Default + Extend<Lit>, LB: Default + Extend<Lit>> FromIterator<Lit> for Double<UB, LB> {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
        let mut dbl = Double::<UB, LB>::default();
        dbl.extend(iter);
        dbl
    }
}

impl<UB: Extend<Lit>, LB: Extend<Lit>> Extend<Lit> for Double<UB, LB> {
    fn extend<I: IntoIterator<Item = Lit>>(&mut self, iter: I) {
        let lits: Vec<Lit> = iter.into_iter().collect();
        self.ub.extend(lits.iter().copied());
        self.lb.extend(lits);
    }
}

impl<UB: Encode, LB: Encode> Encode for Double<UB, LB> {
    fn n_lits(&self) -> usize {
        self.ub.n_lits()
    }
}

impl<UB: BoundUpper, LB: Encode> BoundUpper for Double<UB, LB> {
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        self.ub.encode_ub(range, col, vm)
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        self.ub.enforce_ub(ub)
    }
}

impl<UB: Encode, LB: BoundLower> BoundLower for Double<UB, LB> {
    fn encode_lb<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        self.lb.encode_lb(range, col, vm)
    }

    fn enforce_lb(&self, lb: usize) -> Result<Vec<Lit>, Error> {
        self.lb.enforce_lb(lb)
    }
}

impl<UB: EncodeStats, LB: EncodeStats> EncodeStats for Double<UB, LB> {
    fn n_clauses(&self) -> usize {
        self.ub.n_clauses() + self.lb.n_clauses()
    }

    fn n_vars(&self) -> u32 {
        self.ub.n_vars() + self.lb.n_vars()
    }
}
