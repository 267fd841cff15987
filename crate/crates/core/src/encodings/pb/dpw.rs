//! Dynamic polynomial watchdog

use std::ops::RangeBounds;

use crate::{
    encodings::{
        inclusive,
        totdb::{NodeCon, NodeId, TotDb},
        CollectClauses, EncodeStats, Error, StatsGuard,
    },
    instances::ManageVars,
    types::Lit,
};

use super::{BoundUpper, Encode};

#[derive(Clone, Debug)]
struct Structure {
    root: NodeId,
    /// Tare literal of bit position `p`, for all positions below the top one
    tares: Vec<Lit>,
    /// Weight of one root output, `2^(P - 1)` for `P` weight bits
    output_weight: usize,
    /// Input weight sum at build time
    weight_sum: usize,
}

/// Dynamic polynomial watchdog encoding for upper bounds.
///
/// One totalizer per weight bit counts the inputs having that bit set. The
/// totalizers are chained bottom up, halving the count of the lower level at
/// each step, so the root counts the weighted sum in units of the top bit.
/// Tare literals pad the bound to the next multiple of that unit.
///
/// The structure is built on the first encode call. Only bounds may change
/// afterwards; adding inputs then fails with [`Error::Unsupported`].
#[derive(Clone, Debug, Default)]
pub struct DynamicPolyWatchdog {
    lits: Vec<(Lit, usize)>,
    weight_sum: usize,
    db: TotDb,
    structure: Option<Structure>,
    n_clauses: usize,
    n_vars: u32,
}

impl DynamicPolyWatchdog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lits(&self) -> &[(Lit, usize)] {
        &self.lits
    }

    fn build(&mut self, vm: &mut dyn ManageVars) -> Structure {
        let max_weight = self.lits.iter().map(|&(_, w)| w).max().unwrap();
        let n_bits = (usize::BITS - max_weight.leading_zeros()) as usize;
        let tares: Vec<Lit> = (0..n_bits - 1).map(|_| vm.new_var().pos_lit()).collect();
        let mut bottom: Option<NodeId> = None;
        for p in 0..n_bits {
            let mut bucket: Vec<Lit> = self
                .lits
                .iter()
                .filter(|&&(_, w)| (w >> p) & 1 == 1)
                .map(|&(l, _)| l)
                .collect();
            if p < n_bits - 1 {
                bucket.push(tares[p]);
            }
            let top = self.db.tree(&bucket).unwrap();
            bottom = Some(match bottom {
                None => top,
                Some(lower) => {
                    let carry = NodeCon { id: lower, divisor: 2 };
                    if self.db.con_len(carry) == 0 {
                        top
                    } else {
                        self.db.internal(NodeCon::full(top), carry)
                    }
                }
            });
        }
        Structure {
            root: bottom.unwrap(),
            tares,
            output_weight: 1 << (n_bits - 1),
            weight_sum: self.weight_sum,
        }
    }
}

impl FromIterator<(Lit, usize)> for DynamicPolyWatchdog {
    fn from_iter<I: IntoIterator<Item = (Lit, usize)>>(iter: I) -> Self {
        let mut dpw = Self::default();
        dpw.extend(iter);
        dpw
    }
}

impl Extend<(Lit, usize)> for DynamicPolyWatchdog {
    fn extend<I: IntoIterator<Item = (Lit, usize)>>(&mut self, iter: I) {
        for (lit, w) in iter {
            if w == 0 {
                continue;
            }
            self.lits.push((lit, w));
            self.weight_sum += w;
        }
    }
}

impl Encode for DynamicPolyWatchdog {
    fn n_lits(&self) -> usize {
        self.lits.len()
    }

    fn weight_sum(&self) -> usize {
        self.weight_sum
    }
}

impl BoundUpper for DynamicPolyWatchdog {
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let Some((lo, hi)) = inclusive(&range, self.weight_sum) else {
            return Ok(());
        };
        if lo >= self.weight_sum {
            return Ok(());
        }
        let guard = StatsGuard::start(col, vm);
        let structure = match &self.structure {
            Some(s) => {
                if s.weight_sum != self.weight_sum {
                    return Err(Error::Unsupported("adding inputs after the structure is encoded"));
                }
                s.clone()
            }
            None => {
                let s = self.build(vm);
                self.structure = Some(s.clone());
                s
            }
        };
        let w = structure.output_weight;
        let mut last = None;
        for k in lo..=hi.min(self.weight_sum - 1) {
            let val = k / w + 1;
            if last != Some(val) {
                self.db.define_ub(structure.root, val, col, vm);
                last = Some(val);
            }
        }
        guard.finish(col, vm, &mut self.n_clauses, &mut self.n_vars);
        Ok(())
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        if ub >= self.weight_sum {
            return Ok(vec![]);
        }
        let Some(s) = &self.structure else {
            return Err(Error::NotEncoded);
        };
        if s.weight_sum != self.weight_sum {
            return Err(Error::NotEncoded);
        }
        let w = s.output_weight;
        let val = ub / w + 1;
        if !self.db.ub_defined(s.root, val) {
            return Err(Error::NotEncoded);
        }
        let tare = w - 1 - ub % w;
        let mut assumps = vec![!self.db.out(s.root, val).unwrap()];
        for (p, &t) in s.tares.iter().enumerate() {
            assumps.push(if (tare >> p) & 1 == 1 { t } else { !t });
        }
        Ok(assumps)
    }
}

impl EncodeStats for DynamicPolyWatchdog {
    fn n_clauses(&self) -> usize {
        self.n_clauses
    }

    fn n_vars(&self) -> u32 {
        self.n_vars
    }
}
