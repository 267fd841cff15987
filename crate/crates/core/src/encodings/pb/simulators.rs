//! Encoders simulated from other encoders

use std::ops::RangeBounds;

use crate::{
    encodings::{card, inclusive, CollectClauses, EncodeStats, Error, Falsity},
    instances::ManageVars,
    types::Lit,
};

use super::{BoundLower, BoundUpper, Encode};

/// Flips the bound direction of the inner encoder by negating its inputs,
/// using `sum(w * l) <= k  <=>  sum(w * !l) >= W - k`
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

impl<E: Default + Extend<(Lit, usize)>> FromIterator<(Lit, usize)> for Inverted<E> {
    fn from_iter<I: IntoIterator<Item = (Lit, usize)>>(iter: I) -> Self {
        let mut inv = Inverted::<E>::default();
        inv.extend(iter);
        inv
    }
}

impl<E: Extend<(Lit, usize)>> Extend<(Lit, usize)> for Inverted<E> {
    fn extend<I: IntoIterator<Item = (Lit, usize)>>(&mut self, iter: I) {
        self.inner.extend(iter.into_iter().map(|(l, w)| (!l, w)))
    }
}

impl<E: Encode> Encode for Inverted<E> {
    fn n_lits(&self) -> usize {
        self.inner.n_lits()
    }

    fn weight_sum(&self) -> usize {
        self.inner.weight_sum()
    }
}

impl<E: BoundLower> BoundUpper for Inverted<E> {
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let total = self.weight_sum();
        match inclusive(&range, total) {
            Some((lo, hi)) if lo < total => self.inner.encode_lb(total - hi.min(total)..=total - lo, col, vm),
            _ => Ok(()),
        }
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        let total = self.weight_sum();
        if ub >= total {
            return Ok(vec![]);
        }
        self.inner.enforce_lb(total - ub)
    }
}

impl<E: BoundUpper> BoundLower for Inverted<E> {
    fn encode_lb<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let total = self.weight_sum();
        let Some((lo, hi)) = inclusive(&range, total) else {
            return Ok(());
        };
        if hi > total {
            self.falsity.ensure(col, vm);
        }
        if lo.max(1) <= hi.min(total) {
            self.inner.encode_ub(total - hi.min(total)..=total - lo.max(1), col, vm)?;
        }
        Ok(())
    }

    fn enforce_lb(&self, lb: usize) -> Result<Vec<Lit>, Error> {
        let total = self.weight_sum();
        if lb == 0 {
            return Ok(vec![]);
        }
        if lb > total {
            return self.falsity.assumps();
        }
        self.inner.enforce_ub(total - lb)
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
}

impl<UB, LB> FromIterator<(Lit, usize)> for Double<UB, LB>
where
    UB: Default + Extend<(Lit, usize)>,
    LB: Default + Extend<(Lit, usize)>,
{
    fn from_iter<I: IntoIterator<Item = (Lit, usize)>>(iter: I) -> Self {
        let mut dbl = Double::<UB, LB>::default();
        dbl.extend(iter);
        dbl
    }
}

impl<UB: Extend<(Lit, usize)>, LB: Extend<(Lit, usize)>> Extend<(Lit, usize)> for Double<UB, LB> {
    fn extend<I: IntoIterator<Item = (Lit, usize)>>(&mut self, iter: I) {
        let lits: Vec<(Lit, usize)> = iter.into_iter().collect();
        self.ub.extend(lits.iter().copied());
        self.lb.extend(lits);
    }
}

impl<UB: Encode, LB: Encode> Encode for Double<UB, LB> {
    fn n_lits(&self) -> usize {
        self.ub.n_lits()
    }

    fn weight_sum(&self) -> usize {
        self.ub.weight_sum()
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

/// Runs a cardinality encoder on a PB constraint by repeating each input
/// literal as often as its weight
#[derive(Clone, Debug, Default)]
pub struct CardSim<C> {
    inner: C,
}

impl<C> CardSim<C> {
    pub fn inner(&self) -> &C {
        &self.inner
    }
}

impl<C: Default + Extend<Lit>> FromIterator<(Lit, usize)> for CardSim<C> {
    fn from_iter<I: IntoIterator<Item = (Lit, usize)>>(iter: I) -> Self {
        let mut sim = CardSim::<C>::default();
        sim.extend(iter);
        sim
    }
}

impl<C: Extend<Lit>> Extend<(Lit, usize)> for CardSim<C> {
    fn extend<I: IntoIterator<Item = (Lit, usize)>>(&mut self, iter: I) {
        self.inner
            .extend(iter.into_iter().flat_map(|(l, w)| std::iter::repeat(l).take(w)))
    }
}

impl<C: card::Encode> Encode for CardSim<C> {
    fn n_lits(&self) -> usize {
        self.inner.n_lits()
    }

    fn weight_sum(&self) -> usize {
        self.inner.n_lits()
    }
}

impl<C: card::BoundUpper> BoundUpper for CardSim<C> {
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        self.inner.encode_ub(range, col, vm)
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        self.inner.enforce_ub(ub)
    }
}

impl<C: card::BoundLower> BoundLower for CardSim<C> {
    fn encode_lb<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        self.inner.encode_lb(range, col, vm)
    }

    fn enforce_lb(&self, lb: usize) -> Result<Vec<Lit>, Error> {
        self.inner.enforce_lb(lb)
    }
}

impl<C: EncodeStats> EncodeStats for CardSim<C> {
    fn n_clauses(&self) -> usize {
        self.inner.n_clauses()
    }

    fn n_vars(&self) -> u32 {
        self.inner.n_vars()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{encodings::card::Totalizer, lit};

    #[test]
    fn card_expansion() {
        let sim: CardSim<Totalizer> = [(lit![0], 2), (lit![1], 1)].into_iter().collect();
        assert_eq!(sim.inner().lits(), &[lit![0], lit![0], lit![1]]);
        assert_eq!(sim.weight_sum(), 3);
    }
}
