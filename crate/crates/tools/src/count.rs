//! Clause and variable counts of encodings over a range of bounds

use std::{fmt::Write as _, str::FromStr};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satkit::{
    encodings::{
        am1::{self, Bimander, Bitwise, Commander, Ladder, Pairwise},
        card::{self, Totalizer},
        pb::{self, BinaryAdder, CardSim, DynamicPolyWatchdog, GeneralizedTotalizer},
        ClauseCounter, CollectClauses,
    },
    instances::{BasicVarManager, ManageVars},
    types::{Lit, Var},
};

pub const DEFAULT_SEED: u64 = 0x5a7_c0de;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    Pairwise,
    Ladder,
    Bitwise,
    Commander,
    Bimander,
    Totalizer,
    Gte,
    Adder,
    Dpw,
    CardSim,
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "pairwise" => Selector::Pairwise,
            "ladder" => Selector::Ladder,
            "bitwise" => Selector::Bitwise,
            "commander" => Selector::Commander,
            "bimander" => Selector::Bimander,
            "totalizer" | "tot" => Selector::Totalizer,
            "gte" => Selector::Gte,
            "adder" => Selector::Adder,
            "dpw" => Selector::Dpw,
            "card-sim" | "card" => Selector::CardSim,
            _ => return Err(format!("unknown encoding `{s}`")),
        })
    }
}

/// Which upper bounds get encoded for the row of bound `k`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RangeMode {
    /// Every bound from the start of the requested range up to `k`
    #[default]
    Cumulative,
    /// Only `k`
    Single,
}

impl FromStr for RangeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cumulative" => Ok(RangeMode::Cumulative),
            "single" => Ok(RangeMode::Single),
            _ => Err(format!("unknown range mode `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Row {
    pub bound: usize,
    pub clauses: usize,
    pub vars: u32,
}

/// `n` weights drawn uniformly from `lo..=hi`, or unit weights
pub fn weights(n: usize, range: Option<(usize, usize)>, seed: u64) -> Vec<usize> {
    match range {
        None => vec![1; n],
        Some((lo, hi)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
        }
    }
}

fn am1_count<E: am1::Encode + FromIterator<Lit>>(lits: &[Lit], col: &mut ClauseCounter, vm: &mut BasicVarManager) {
    let mut enc: E = lits.iter().copied().collect();
    enc.encode(col, vm);
}

fn card_count<E: card::BoundUpper + FromIterator<Lit>>(
    lits: &[Lit],
    lo: usize,
    hi: usize,
    col: &mut ClauseCounter,
    vm: &mut BasicVarManager,
) {
    let mut enc: E = lits.iter().copied().collect();
    enc.encode_ub(lo..=hi, col, vm).expect("fresh encoder");
}

fn pb_count<E: pb::BoundUpper + FromIterator<(Lit, usize)>>(
    terms: &[(Lit, usize)],
    lo: usize,
    hi: usize,
    col: &mut ClauseCounter,
    vm: &mut BasicVarManager,
) {
    let mut enc: E = terms.iter().copied().collect();
    enc.encode_ub(lo..=hi, col, vm).expect("fresh encoder");
}

/// Counts for a fresh encoder per bound in `bounds`. Cardinality and
/// at-most-one encodings ignore the weights.
pub fn count_clauses(sel: Selector, weights: &[usize], bounds: (usize, usize), mode: RangeMode) -> Vec<Row> {
    let n = weights.len();
    let lits: Vec<Lit> = (0..n as u32).map(Lit::positive).collect();
    let terms: Vec<(Lit, usize)> = lits.iter().copied().zip(weights.iter().copied()).collect();
    (bounds.0..=bounds.1)
        .map(|bound| {
            let lo = match mode {
                RangeMode::Cumulative => bounds.0,
                RangeMode::Single => bound,
            };
            let mut col = ClauseCounter::default();
            let mut vm = BasicVarManager::from_next_free(Var::new(n as u32));
            match sel {
                Selector::Pairwise => am1_count::<Pairwise>(&lits, &mut col, &mut vm),
                Selector::Ladder => am1_count::<Ladder>(&lits, &mut col, &mut vm),
                Selector::Bitwise => am1_count::<Bitwise>(&lits, &mut col, &mut vm),
                Selector::Commander => am1_count::<Commander>(&lits, &mut col, &mut vm),
                Selector::Bimander => am1_count::<Bimander>(&lits, &mut col, &mut vm),
                Selector::Totalizer => card_count::<Totalizer>(&lits, lo, bound, &mut col, &mut vm),
                Selector::Gte => pb_count::<GeneralizedTotalizer>(&terms, lo, bound, &mut col, &mut vm),
                Selector::Adder => pb_count::<BinaryAdder>(&terms, lo, bound, &mut col, &mut vm),
                Selector::Dpw => pb_count::<DynamicPolyWatchdog>(&terms, lo, bound, &mut col, &mut vm),
                Selector::CardSim => pb_count::<CardSim<Totalizer>>(&terms, lo, bound, &mut col, &mut vm),
            }
            Row {
                bound,
                clauses: col.n_clauses(),
                vars: vm.n_used() - n as u32,
            }
        })
        .collect()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from("bound,clauses,vars\n");
    for row in rows {
        writeln!(out, "{},{},{}", row.bound, row.clauses, row.vars).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_constant() {
        let rows = count_clauses(Selector::Pairwise, &weights(300, None, 0), (1, 3), RangeMode::Cumulative);
        assert!(rows.iter().all(|r| r.clauses == 44850 && r.vars == 0));
    }

    #[test]
    fn seeded_weights() {
        let a = weights(20, Some((1, 100)), 7);
        assert_eq!(a, weights(20, Some((1, 100)), 7));
        assert_ne!(a, weights(20, Some((1, 100)), 8));
        assert!(a.iter().all(|w| (1..=100).contains(w)));
    }

    #[test]
    fn csv_layout() {
        let rows = [Row { bound: 1, clauses: 2, vars: 3 }];
        assert_eq!(to_csv(&rows), "bound,clauses,vars\n1,2,3\n");
    }
}
