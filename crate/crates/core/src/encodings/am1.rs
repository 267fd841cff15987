//! # At-Most-One Encodings
//!
//! Non-incremental encodings of `sum(lits) <= 1`. All variants emit nothing
//! for fewer than two inputs.

use crate::{
    encodings::CollectClauses,
    instances::ManageVars,
    types::{Clause, Lit},
};

/// Group size of the commander encoding
pub const COMMANDER_GROUP: usize = 4;

/// Common interface of the at-most-one encodings
pub trait Encode {
    fn encode<Col: CollectClauses>(&mut self, col: &mut Col, var_manager: &mut dyn ManageVars);
}

macro_rules! am1_encoder {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, Default, PartialEq, Eq)]
        pub struct $name {
            lits: Vec<Lit>,
        }

        impl $name {
            pub fn new() -> Self {
                Self::default()
            }

            pub fn lits(&self) -> &[Lit] {
                &self.lits
            }
        }

        impl FromIterator<Lit> for $name {
            fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Self {
                $name { lits: iter.into_iter().collect() }
            }
        }

        impl Extend<Lit> for $name {
            fn extend<I: IntoIterator<Item = Lit>>(&mut self, iter: I) {
                self.lits.extend(iter)
            }
        }
    };
}

am1_encoder!(
    /// One binary clause per pair of inputs, no auxiliary variables
    Pairwise
);
am1_encoder!(
    /// Sequential prefix variables `s_i` ("some input among the first `i` is true")
    Ladder
);
am1_encoder!(
    /// Each input implies the binary representation of its index over
    /// `ceil(log2 n)` auxiliary variables
    Bitwise
);
am1_encoder!(
    /// Groups of four inputs with one commander variable per group,
    /// recursing over the commanders
    Commander
);
am1_encoder!(
    /// Groups of at most two inputs, bitwise encoding over the group indices
    Bimander
);

impl Encode for Pairwise {
    fn encode<Col: CollectClauses>(&mut self, col: &mut Col, _: &mut dyn ManageVars) {
        pairwise(&self.lits, col);
    }
}

impl Encode for Ladder {
    fn encode<Col: CollectClauses>(&mut self, col: &mut Col, vm: &mut dyn ManageVars) {
        let n = self.lits.len();
        if n <= 1 {
            return;
        }
        let s: Vec<Lit> = (0..n - 1).map(|_| vm.new_var().pos_lit()).collect();
        for i in 0..n {
            let x = self.lits[i];
            if i < n - 1 {
                col.add_clause(Clause::from([!x, s[i]]));
            }
            if i > 0 {
                if i < n - 1 {
                    col.add_clause(Clause::from([!s[i - 1], s[i]]));
                }
                col.add_clause(Clause::from([!x, !s[i - 1]]));
            }
        }
    }
}

impl Encode for Bitwise {
    fn encode<Col: CollectClauses>(&mut self, col: &mut Col, vm: &mut dyn ManageVars) {
        bitwise(&self.lits, col, vm);
    }
}

impl Encode for Commander {
    fn encode<Col: CollectClauses>(&mut self, col: &mut Col, vm: &mut dyn ManageVars) {
        commander(&self.lits, col, vm);
    }
}

impl Encode for Bimander {
    fn encode<Col: CollectClauses>(&mut self, col: &mut Col, vm: &mut dyn ManageVars) {
        let n = self.lits.len();
        if n <= 1 {
            return;
        }
        let groups: Vec<&[Lit]> = self.lits.chunks(2).collect();
        let m = bits_for(groups.len());
        let bits: Vec<Lit> = (0..m).map(|_| vm.new_var().pos_lit()).collect();
        for (g, group) in groups.iter().enumerate() {
            pairwise(group, col);
            for &x in group.iter() {
                for (j, &b) in bits.iter().enumerate() {
                    let bit = if (g >> j) & 1 == 1 { b } else { !b };
                    col.add_clause(Clause::from([!x, bit]));
                }
            }
        }
    }
}

fn bits_for(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn pairwise<Col: CollectClauses>(lits: &[Lit], col: &mut Col) {
    for i in 0..lits.len() {
        for j in i + 1..lits.len() {
            col.add_clause(Clause::from([!lits[i], !lits[j]]));
        }
    }
}

fn bitwise<Col: CollectClauses>(lits: &[Lit], col: &mut Col, vm: &mut dyn ManageVars) {
    let n = lits.len();
    if n <= 1 {
        return;
    }
    let bits: Vec<Lit> = (0..bits_for(n)).map(|_| vm.new_var().pos_lit()).collect();
    for (i, &x) in lits.iter().enumerate() {
        for (j, &b) in bits.iter().enumerate() {
            let bit = if (i >> j) & 1 == 1 { b } else { !b };
            col.add_clause(Clause::from([!x, bit]));
        }
    }
}

fn commander<Col: CollectClauses>(lits: &[Lit], col: &mut Col, vm: &mut dyn ManageVars) {
    if lits.len() <= COMMANDER_GROUP {
        pairwise(lits, col);
        return;
    }
    let mut commanders = Vec::with_capacity(lits.len().div_ceil(COMMANDER_GROUP));
    for group in lits.chunks(COMMANDER_GROUP) {
        if group.len() == 1 {
            commanders.push(group[0]);
            continue;
        }
        let c = vm.new_var().pos_lit();
        for &x in group {
            col.add_clause(Clause::from([!x, c]));
        }
        pairwise(group, col);
        commanders.push(c);
    }
    commander(&commanders, col, vm);
}
