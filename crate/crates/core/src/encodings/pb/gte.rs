//! Generalized totalizer

use std::{
    collections::{BTreeMap, BTreeSet},
    ops::RangeBounds,
};

use crate::{
    encodings::{inclusive, CollectClauses, EncodeStats, Error, StatsGuard},
    instances::ManageVars,
    types::{Clause, Lit},
};

use super::{BoundUpper, Encode};

#[derive(Clone, Debug)]
enum Node {
    Leaf(Lit, usize),
    Internal {
        left: usize,
        right: usize,
        max_val: usize,
        /// Reachable sums up to `reach_cap`
        reach: BTreeSet<usize>,
        reach_cap: usize,
        outs: BTreeMap<usize, Lit>,
    },
}

/// Generalized totalizer encoding. Node outputs exist for distinct
/// reachable weight sums.
///
/// Encoding bound `k` defines the root outputs in `(k, k + max_weight]`.
/// Every assignment exceeding `k` has a subset of true inputs whose sum lies
/// in that window, so these outputs suffice to enforce the bound.
#[derive(Clone, Debug, Default)]
pub struct GeneralizedTotalizer {
    nodes: Vec<Node>,
    root: Option<usize>,
    lits: Vec<(Lit, usize)>,
    n_encoded: usize,
    weight_sum: usize,
    max_weight: usize,
    n_clauses: usize,
    n_vars: u32,
}

impl GeneralizedTotalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lits(&self) -> &[(Lit, usize)] {
        &self.lits
    }

    fn max_val(&self, id: usize) -> usize {
        match &self.nodes[id] {
            Node::Leaf(_, w) => *w,
            Node::Internal { max_val, .. } => *max_val,
        }
    }

    fn tree(&mut self, leaves: &[(Lit, usize)]) -> usize {
        if leaves.len() == 1 {
            self.nodes.push(Node::Leaf(leaves[0].0, leaves[0].1));
            return self.nodes.len() - 1;
        }
        let mid = leaves.len() / 2;
        let left = self.tree(&leaves[..mid]);
        let right = self.tree(&leaves[mid..]);
        self.internal(left, right)
    }

    fn internal(&mut self, left: usize, right: usize) -> usize {
        let max_val = self.max_val(left) + self.max_val(right);
        self.nodes.push(Node::Internal {
            left,
            right,
            max_val,
            reach: BTreeSet::new(),
            reach_cap: 0,
            outs: BTreeMap::new(),
        });
        self.nodes.len() - 1
    }

    fn build_pending(&mut self) {
        if self.n_encoded == self.lits.len() {
            return;
        }
        let mut batch: Vec<(Lit, usize)> = Vec::new();
        for &(lit, w) in &self.lits[self.n_encoded..] {
            match batch.iter_mut().find(|(l, _)| *l == lit) {
                Some(entry) => entry.1 += w,
                None => batch.push((lit, w)),
            }
        }
        batch.sort_by_key(|&(_, w)| w);
        let sub = self.tree(&batch);
        self.root = Some(match self.root {
            None => sub,
            Some(old) => self.internal(old, sub),
        });
        self.n_encoded = self.lits.len();
    }

    /// Reachable sums of a node, complete up to the node's current cap
    fn reach(&self, id: usize) -> Vec<usize> {
        match &self.nodes[id] {
            Node::Leaf(_, w) => vec![*w],
            Node::Internal { reach, .. } => reach.iter().copied().collect(),
        }
    }

    fn reach_complete_to(&self, id: usize) -> usize {
        match &self.nodes[id] {
            Node::Leaf(..) => usize::MAX,
            Node::Internal { reach_cap, max_val, .. } => {
                if reach_cap >= max_val {
                    usize::MAX
                } else {
                    *reach_cap
                }
            }
        }
    }

    fn contains(&self, id: usize, val: usize) -> bool {
        match &self.nodes[id] {
            Node::Leaf(_, w) => *w == val,
            Node::Internal { reach, .. } => reach.contains(&val),
        }
    }

    fn ensure_reach(&mut self, id: usize, cap: usize) {
        if self.reach_complete_to(id) >= cap {
            return;
        }
        let Node::Internal { left, right, .. } = self.nodes[id] else {
            unreachable!()
        };
        self.ensure_reach(left, cap);
        self.ensure_reach(right, cap);
        let lvals = self.reach(left);
        let rvals = self.reach(right);
        let mut reach = BTreeSet::new();
        for &a in std::iter::once(&0).chain(lvals.iter()) {
            if a > cap {
                break;
            }
            for &b in std::iter::once(&0).chain(rvals.iter()) {
                if a + b > cap {
                    break;
                }
                if a + b > 0 {
                    reach.insert(a + b);
                }
            }
        }
        if let Node::Internal {
            reach: r, reach_cap, ..
        } = &mut self.nodes[id]
        {
            *r = reach;
            *reach_cap = cap;
        }
    }

    /// Defines the output for reachable value `val` and returns it
    fn define<Col: CollectClauses>(&mut self, id: usize, val: usize, col: &mut Col, vm: &mut dyn ManageVars) -> Lit {
        let (left, right) = match &self.nodes[id] {
            Node::Leaf(lit, _) => return *lit,
            Node::Internal { left, right, outs, .. } => {
                if let Some(&out) = outs.get(&val) {
                    return out;
                }
                (*left, *right)
            }
        };
        let mut pairs = Vec::new();
        for a in std::iter::once(0).chain(self.reach(left)) {
            if a > val {
                break;
            }
            let b = val - a;
            if b == 0 || self.contains(right, b) {
                let l = (a > 0).then(|| self.define(left, a, col, vm));
                let r = (b > 0).then(|| self.define(right, b, col, vm));
                pairs.push((l, r));
            }
        }
        let out = vm.new_var().pos_lit();
        for (l, r) in pairs {
            let mut cl = Clause::with_capacity(3);
            cl.extend(l.map(|l| !l));
            cl.extend(r.map(|r| !r));
            cl.add(out);
            col.add_clause(cl);
        }
        if let Node::Internal { outs, .. } = &mut self.nodes[id] {
            outs.insert(val, out);
        }
        out
    }

    fn window(&self, ub: usize) -> usize {
        ub.saturating_add(self.max_weight).min(self.weight_sum)
    }
}

impl FromIterator<(Lit, usize)> for GeneralizedTotalizer {
    fn from_iter<I: IntoIterator<Item = (Lit, usize)>>(iter: I) -> Self {
        let mut gte = Self::default();
        gte.extend(iter);
        gte
    }
}

impl Extend<(Lit, usize)> for GeneralizedTotalizer {
    fn extend<I: IntoIterator<Item = (Lit, usize)>>(&mut self, iter: I) {
        for (lit, w) in iter {
            if w == 0 {
                continue;
            }
            self.lits.push((lit, w));
            self.weight_sum += w;
            self.max_weight = self.max_weight.max(w);
        }
    }
}

impl Encode for GeneralizedTotalizer {
    fn n_lits(&self) -> usize {
        self.lits.len()
    }

    fn weight_sum(&self) -> usize {
        self.weight_sum
    }
}

impl BoundUpper for GeneralizedTotalizer {
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
        self.build_pending();
        let root = self.root.unwrap();
        let cap = self.window(hi);
        self.ensure_reach(root, cap);
        let vals: Vec<usize> = self.reach(root).into_iter().filter(|&v| v > lo && v <= cap).collect();
        for v in vals {
            self.define(root, v, col, vm);
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
        let root = self.root.unwrap();
        let cap = self.window(ub);
        if self.reach_complete_to(root) < cap {
            return Err(Error::NotEncoded);
        }
        match &self.nodes[root] {
            Node::Leaf(lit, _) => Ok(vec![!*lit]),
            Node::Internal { reach, outs, .. } => reach
                .range(ub + 1..=cap)
                .map(|v| outs.get(v).map(|&o| !o).ok_or(Error::NotEncoded))
                .collect(),
        }
    }
}

impl EncodeStats for GeneralizedTotalizer {
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
    use crate::{instances::BasicVarManager, lit, var};

    #[test]
    fn reachable_sums() {
        let mut gte: GeneralizedTotalizer = [(lit![0], 2), (lit![1], 3), (lit![2], 4)].into_iter().collect();
        gte.build_pending();
        let root = gte.root.unwrap();
        gte.ensure_reach(root, 9);
        assert_eq!(gte.reach(root), vec![2, 3, 4, 5, 6, 7, 9]);
    }

    #[test]
    fn merges_duplicates() {
        let mut gte: GeneralizedTotalizer = [(lit![0], 2), (lit![0], 3)].into_iter().collect();
        gte.build_pending();
        assert!(matches!(gte.nodes[gte.root.unwrap()], Node::Leaf(_, 5)));
    }

    #[test]
    fn window_enforcement() {
        let mut gte: GeneralizedTotalizer = [(lit![0], 2), (lit![1], 3), (lit![2], 4)].into_iter().collect();
        let mut vm = BasicVarManager::from_next_free(var![3]);
        let mut cls = Vec::new();
        gte.encode_ub(5..=5, &mut cls, &mut vm).unwrap();
        // reachable sums in (5, 9]
        assert_eq!(gte.enforce_ub(5).unwrap().len(), 3);
        assert_eq!(gte.enforce_ub(4), Err(Error::NotEncoded));
        assert_eq!(gte.enforce_ub(9), Ok(vec![]));
    }
}
