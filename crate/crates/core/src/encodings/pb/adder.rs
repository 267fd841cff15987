//! Binary adder encoding with gated comparators

use std::{collections::BTreeMap, collections::VecDeque, ops::RangeBounds};

use crate::{
    encodings::{inclusive, CollectClauses, EncodeStats, Error, StatsGuard},
    instances::ManageVars,
    types::{Clause, Lit},
};

use super::{BoundLower, BoundUpper, Encode};

/// Binary adder encoding.
///
/// Input literals are sorted into buckets by the set bits of their weights
/// and reduced with full and half adders until every bucket holds at most
/// one literal, the sum bit of that position. Adder outputs are fully
/// defined in both directions. Bounds are enforced through one comparator
/// per bound, gated by an assumption literal.
#[derive(Clone, Debug, Default)]
pub struct BinaryAdder {
    lits: Vec<(Lit, usize)>,
    n_encoded: usize,
    weight_sum: usize,
    /// `buckets[p]` holds the literals of weight `2^p` awaiting reduction
    buckets: Vec<VecDeque<Lit>>,
    ub_gates: BTreeMap<usize, Option<Lit>>,
    lb_gates: BTreeMap<usize, Option<Lit>>,
    n_clauses: usize,
    n_vars: u32,
}

impl BinaryAdder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lits(&self) -> &[(Lit, usize)] {
        &self.lits
    }

    fn encoded_sum(&self) -> usize {
        self.lits[..self.n_encoded].iter().map(|&(_, w)| w).sum()
    }

    /// The sum bits, least significant first. `None` is constant false.
    fn sum_bits(&self) -> Vec<Option<Lit>> {
        self.buckets.iter().map(|b| b.front().copied()).collect()
    }

    fn build_pending<Col: CollectClauses>(&mut self, col: &mut Col, vm: &mut dyn ManageVars) {
        if self.n_encoded == self.lits.len() {
            return;
        }
        for &(lit, w) in &self.lits[self.n_encoded..] {
            let mut w = w;
            let mut p = 0;
            while w > 0 {
                if w & 1 == 1 {
                    if self.buckets.len() <= p {
                        self.buckets.resize(p + 1, VecDeque::new());
                    }
                    self.buckets[p].push_back(lit);
                }
                w >>= 1;
                p += 1;
            }
        }
        let mut p = 0;
        while p < self.buckets.len() {
            while self.buckets[p].len() >= 2 {
                let a = self.buckets[p].pop_front().unwrap();
                let b = self.buckets[p].pop_front().unwrap();
                let (sum, carry) = if let Some(c) = self.buckets[p].pop_front() {
                    full_adder(a, b, c, col, vm)
                } else {
                    half_adder(a, b, col, vm)
                };
                self.buckets[p].push_back(sum);
                if self.buckets.len() <= p + 1 {
                    self.buckets.push(VecDeque::new());
                }
                self.buckets[p + 1].push_back(carry);
            }
            p += 1;
        }
        self.n_encoded = self.lits.len();
        self.ub_gates.clear();
        self.lb_gates.clear();
    }

    fn gate<Col: CollectClauses>(clauses: Vec<Clause>, col: &mut Col, vm: &mut dyn ManageVars) -> Option<Lit> {
        if clauses.is_empty() {
            return None;
        }
        let g = vm.new_var().pos_lit();
        for mut cl in clauses {
            cl.add(!g);
            col.add_clause(cl);
        }
        Some(g)
    }

    /// Comparator clauses for `sum <= k`
    fn ub_comparator(bits: &[Option<Lit>], k: usize) -> Vec<Clause> {
        let mut clauses = Vec::new();
        'outer: for i in 0..bits.len() {
            if (k >> i) & 1 == 1 {
                continue;
            }
            let Some(si) = bits[i] else { continue };
            let mut cl = Clause::from([!si]);
            for (j, sj) in bits.iter().enumerate().skip(i + 1) {
                if (k >> j) & 1 == 1 {
                    match sj {
                        Some(sj) => cl.add(!*sj),
                        None => continue 'outer,
                    }
                }
            }
            clauses.push(cl);
        }
        clauses
    }

    /// Comparator clauses for `sum >= k`
    fn lb_comparator(bits: &[Option<Lit>], k: usize) -> Vec<Clause> {
        let mut clauses = Vec::new();
        for i in 0..usize::BITS as usize {
            if (k >> i) & 1 == 0 {
                continue;
            }
            let mut cl = Clause::new();
            if let Some(Some(si)) = bits.get(i) {
                cl.add(*si);
            }
            for (j, sj) in bits.iter().enumerate().skip(i + 1) {
                if (k >> j) & 1 == 0 {
                    cl.extend(*sj);
                }
            }
            clauses.push(cl);
        }
        clauses
    }
}

fn full_adder<Col: CollectClauses>(a: Lit, b: Lit, c: Lit, col: &mut Col, vm: &mut dyn ManageVars) -> (Lit, Lit) {
    let s = vm.new_var().pos_lit();
    let carry = vm.new_var().pos_lit();
    // s <-> a xor b xor c
    for mask in 0..8u8 {
        let neg_a = mask & 1 == 1;
        let neg_b = mask & 2 == 2;
        let neg_c = mask & 4 == 4;
        // the clause excludes the assignment a = neg_a, b = neg_b, c = neg_c
        let parity = (neg_a as u8 + neg_b as u8 + neg_c as u8) % 2 == 1;
        let la = if neg_a { !a } else { a };
        let lb = if neg_b { !b } else { b };
        let lc = if neg_c { !c } else { c };
        let ls = if parity { s } else { !s };
        col.add_clause(Clause::from([la, lb, lc, ls]));
    }
    // carry <-> majority(a, b, c)
    for (x, y) in [(a, b), (a, c), (b, c)] {
        col.add_clause(Clause::from([!x, !y, carry]));
        col.add_clause(Clause::from([x, y, !carry]));
    }
    (s, carry)
}

fn half_adder<Col: CollectClauses>(a: Lit, b: Lit, col: &mut Col, vm: &mut dyn ManageVars) -> (Lit, Lit) {
    let s = vm.new_var().pos_lit();
    let carry = vm.new_var().pos_lit();
    col.add_clause(Clause::from([!a, !b, !s]));
    col.add_clause(Clause::from([a, b, !s]));
    col.add_clause(Clause::from([!a, b, s]));
    col.add_clause(Clause::from([a, !b, s]));
    col.add_clause(Clause::from([!a, !b, carry]));
    col.add_clause(Clause::from([a, !carry]));
    col.add_clause(Clause::from([b, !carry]));
    (s, carry)
}

impl FromIterator<(Lit, usize)> for BinaryAdder {
    fn from_iter<I: IntoIterator<Item = (Lit, usize)>>(iter: I) -> Self {
        let mut adder = Self::default();
        adder.extend(iter);
        adder
    }
}

impl Extend<(Lit, usize)> for BinaryAdder {
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

impl Encode for BinaryAdder {
    fn n_lits(&self) -> usize {
        self.lits.len()
    }

    fn weight_sum(&self) -> usize {
        self.weight_sum
    }
}

impl BoundUpper for BinaryAdder {
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
        self.build_pending(col, vm);
        let bits = self.sum_bits();
        for k in lo..=hi.min(self.weight_sum - 1) {
            if !self.ub_gates.contains_key(&k) {
                let gate = Self::gate(Self::ub_comparator(&bits, k), col, vm);
                self.ub_gates.insert(k, gate);
            }
        }
        guard.finish(col, vm, &mut self.n_clauses, &mut self.n_vars);
        Ok(())
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        if ub >= self.weight_sum {
            return Ok(vec![]);
        }
        if self.n_encoded < self.lits.len() {
            return Err(Error::NotEncoded);
        }
        match self.ub_gates.get(&ub) {
            None => Err(Error::NotEncoded),
            Some(gate) => Ok(gate.iter().copied().collect()),
        }
    }
}

impl BoundLower for BinaryAdder {
    fn encode_lb<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: RangeBounds<usize>,
    {
        let Some((lo, hi)) = inclusive(&range, self.weight_sum) else {
            return Ok(());
        };
        let lo = lo.max(1);
        if lo > hi {
            return Ok(());
        }
        let guard = StatsGuard::start(col, vm);
        self.build_pending(col, vm);
        debug_assert_eq!(self.encoded_sum(), self.weight_sum);
        let bits = self.sum_bits();
        let mut impossible_done = false;
        for k in lo..=hi {
            if self.lb_gates.contains_key(&k) {
                continue;
            }
            if k > self.weight_sum {
                // one gate covers every impossible bound
                if impossible_done {
                    break;
                }
                let gate = self
                    .lb_gates
                    .range(self.weight_sum + 1..)
                    .next()
                    .map(|(_, g)| *g)
                    .unwrap_or_else(|| Self::gate(vec![Clause::new()], col, vm));
                self.lb_gates.insert(k, gate);
                impossible_done = true;
                continue;
            }
            let gate = Self::gate(Self::lb_comparator(&bits, k), col, vm);
            self.lb_gates.insert(k, gate);
        }
        guard.finish(col, vm, &mut self.n_clauses, &mut self.n_vars);
        Ok(())
    }

    fn enforce_lb(&self, lb: usize) -> Result<Vec<Lit>, Error> {
        if lb == 0 {
            return Ok(vec![]);
        }
        if lb <= self.weight_sum && self.n_encoded < self.lits.len() {
            return Err(Error::NotEncoded);
        }
        if lb > self.weight_sum {
            // any gate above the sum is the permanently false gate
            return match self.lb_gates.range(self.weight_sum + 1..).next() {
                Some((_, gate)) if self.n_encoded == self.lits.len() => Ok(gate.iter().copied().collect()),
                _ => Err(Error::NotEncoded),
            };
        }
        match self.lb_gates.get(&lb) {
            None => Err(Error::NotEncoded),
            Some(gate) => Ok(gate.iter().copied().collect()),
        }
    }
}

impl EncodeStats for BinaryAdder {
    fn n_clauses(&self) -> usize {
        self.n_clauses
    }

    fn n_vars(&self) -> u32 {
        self.n_vars
    }
}
