mod common;

use std::collections::HashSet;

use common::{count_true, cubes, pos_lits, pure_literal_removals, weight_true, Extension};
use proptest::prelude::*;
use satkit::{
    encodings::{
        am1::{self, Bimander, Bitwise, Commander, Ladder, Pairwise},
        card::{self, Totalizer},
        pb::{self, BinaryAdder, CardSim, DynamicPolyWatchdog, GeneralizedTotalizer},
        CollectClauses, EncodeStats, Error,
    },
    instances::{BasicVarManager, ManageVars},
    types::{Clause, Lit, Var},
};

fn vm_after(n: usize) -> BasicVarManager {
    BasicVarManager::from_next_free(Var::new(n as u32))
}

fn frozen(inputs: &[Lit], assumps: &[Lit]) -> HashSet<Var> {
    inputs.iter().chain(assumps).map(|l| l.var()).collect()
}

fn with(cube: &[Lit], assumps: &[Lit]) -> Vec<Lit> {
    cube.iter().chain(assumps).copied().collect()
}

#[derive(Clone, Copy, Debug)]
enum Dir {
    Ub,
    Lb,
}

/// Encodes a single bound, then checks every input assignment and the
/// absence of pure literals
fn check_card<E>(n: usize, bound: usize, dir: Dir) -> Result<(), TestCaseError>
where
    E: card::BoundUpper + card::BoundLower + FromIterator<Lit>,
{
    let lits = pos_lits(n as u32);
    let mut enc: E = lits.iter().copied().collect();
    let mut cls: Vec<Clause> = vec![];
    let mut vm = vm_after(n);
    let assumps = match dir {
        Dir::Ub => {
            enc.encode_ub(bound..=bound, &mut cls, &mut vm).unwrap();
            enc.enforce_ub(bound).unwrap()
        }
        Dir::Lb => {
            enc.encode_lb(bound..=bound, &mut cls, &mut vm).unwrap();
            enc.enforce_lb(bound).unwrap()
        }
    };
    prop_assert_eq!(pure_literal_removals(&cls, &frozen(&lits, &assumps)), 0);
    let mut ext = Extension::new(&cls);
    for cube in cubes(&lits) {
        let cnt = count_true(&lits, &cube);
        let expected = match dir {
            Dir::Ub => cnt <= bound,
            Dir::Lb => cnt >= bound,
        };
        prop_assert_eq!(ext.sat(&with(&cube, &assumps)), expected, "cube {:?}", cube);
    }
    Ok(())
}

fn check_pb_ub<E>(terms: &[(Lit, usize)], bound: usize) -> Result<(), TestCaseError>
where
    E: pb::BoundUpper + FromIterator<(Lit, usize)>,
{
    let lits: Vec<Lit> = terms.iter().map(|&(l, _)| l).collect();
    let mut enc: E = terms.iter().copied().collect();
    let mut cls: Vec<Clause> = vec![];
    let mut vm = vm_after(lits.len());
    enc.encode_ub(bound..=bound, &mut cls, &mut vm).unwrap();
    let assumps = enc.enforce_ub(bound).unwrap();
    prop_assert_eq!(pure_literal_removals(&cls, &frozen(&lits, &assumps)), 0);
    let mut ext = Extension::new(&cls);
    for cube in cubes(&lits) {
        let expected = weight_true(terms, &cube) <= bound;
        prop_assert_eq!(ext.sat(&with(&cube, &assumps)), expected, "cube {:?}", cube);
    }
    Ok(())
}

fn check_pb_lb<E>(terms: &[(Lit, usize)], bound: usize) -> Result<(), TestCaseError>
where
    E: pb::BoundLower + FromIterator<(Lit, usize)>,
{
    let lits: Vec<Lit> = terms.iter().map(|&(l, _)| l).collect();
    let mut enc: E = terms.iter().copied().collect();
    let mut cls: Vec<Clause> = vec![];
    let mut vm = vm_after(lits.len());
    enc.encode_lb(bound..=bound, &mut cls, &mut vm).unwrap();
    let assumps = enc.enforce_lb(bound).unwrap();
    let mut ext = Extension::new(&cls);
    for cube in cubes(&lits) {
        let expected = weight_true(terms, &cube) >= bound;
        prop_assert_eq!(ext.sat(&with(&cube, &assumps)), expected, "cube {:?}", cube);
    }
    Ok(())
}

fn check_am1<E: am1::Encode + FromIterator<Lit>>(n: usize) -> Result<(), TestCaseError> {
    let lits = pos_lits(n as u32);
    let mut enc: E = lits.iter().copied().collect();
    let mut cls: Vec<Clause> = vec![];
    let mut vm = vm_after(n);
    enc.encode(&mut cls, &mut vm);
    prop_assert_eq!(pure_literal_removals(&cls, &frozen(&lits, &[])), 0);
    let mut ext = Extension::new(&cls);
    for cube in cubes(&lits) {
        prop_assert_eq!(ext.sat(&cube), count_true(&lits, &cube) <= 1);
    }
    Ok(())
}

fn weighted() -> impl Strategy<Value = (Vec<(Lit, usize)>, usize)> {
    prop::collection::vec(1usize..=10, 1..=6).prop_flat_map(|ws| {
        let sum: usize = ws.iter().sum();
        let terms: Vec<(Lit, usize)> = ws.into_iter().enumerate().map(|(i, w)| (Lit::positive(i as u32), w)).collect();
        (Just(terms), 0..=sum + 1)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn totalizer_ub((n, k) in (1usize..=6).prop_flat_map(|n| (Just(n), 0..=n + 1))) {
        check_card::<Totalizer>(n, k, Dir::Ub)?;
    }

    #[test]
    fn totalizer_lb((n, k) in (1usize..=6).prop_flat_map(|n| (Just(n), 0..=n + 1))) {
        check_card::<Totalizer>(n, k, Dir::Lb)?;
    }

    #[test]
    fn gte_ub((terms, k) in weighted()) {
        check_pb_ub::<GeneralizedTotalizer>(&terms, k)?;
    }

    #[test]
    fn adder_ub((terms, k) in weighted()) {
        check_pb_ub::<BinaryAdder>(&terms, k)?;
    }

    #[test]
    fn adder_lb((terms, k) in weighted()) {
        check_pb_lb::<BinaryAdder>(&terms, k)?;
    }

    #[test]
    fn dpw_ub((terms, k) in weighted()) {
        check_pb_ub::<DynamicPolyWatchdog>(&terms, k)?;
    }

    #[test]
    fn inverted_gte_lb((terms, k) in weighted()) {
        check_pb_lb::<pb::Inverted<GeneralizedTotalizer>>(&terms, k)?;
    }

    #[test]
    fn card_sim((terms, k) in weighted()) {
        check_pb_ub::<CardSim<Totalizer>>(&terms, k)?;
        check_pb_lb::<CardSim<Totalizer>>(&terms, k)?;
    }

    #[test]
    fn inverted_totalizer((n, k) in (1usize..=6).prop_flat_map(|n| (Just(n), 0..=n + 1))) {
        check_card::<card::Inverted<Totalizer>>(n, k, Dir::Ub)?;
        check_card::<card::Inverted<Totalizer>>(n, k, Dir::Lb)?;
    }
}

#[test]
fn am1_all_variants() {
    for n in 0..=8 {
        check_am1::<Pairwise>(n).unwrap();
        check_am1::<Ladder>(n).unwrap();
        check_am1::<Bitwise>(n).unwrap();
        check_am1::<Commander>(n).unwrap();
        check_am1::<Bimander>(n).unwrap();
    }
}

#[derive(Clone, Debug)]
enum Op {
    Extend(Vec<usize>),
    Encode(usize, usize),
}

fn ops() -> impl Strategy<Value = Vec<Op>> {
    prop::collection::vec(
        prop_oneof![
            prop::collection::vec(1usize..=10, 1..=2).prop_map(Op::Extend),
            (0usize..=12, 0usize..=12).prop_map(|(a, b)| Op::Encode(a.min(b), a.max(b))),
        ],
        1..=8,
    )
}

/// Runs the ops, returning the clauses, the final inputs and the encoder
fn run_ops<E>(ops: &[Op], max_inputs: usize) -> (Vec<Clause>, Vec<(Lit, usize)>, E, BasicVarManager)
where
    E: pb::BoundUpper + Default,
{
    let mut terms: Vec<(Lit, usize)> = vec![];
    let mut enc = E::default();
    let mut cls = vec![];
    let mut vm = vm_after(max_inputs);
    for op in ops {
        match op {
            Op::Extend(ws) => {
                let new: Vec<(Lit, usize)> = ws
                    .iter()
                    .take(max_inputs - terms.len())
                    .enumerate()
                    .map(|(i, &w)| (Lit::positive((terms.len() + i) as u32), w))
                    .collect();
                terms.extend(&new);
                enc.extend(new);
            }
            Op::Encode(lo, hi) => {
                if !terms.is_empty() {
                    enc.encode_ub(*lo..=*hi, &mut cls, &mut vm).unwrap();
                }
            }
        }
    }
    (cls, terms, enc, vm)
}

fn check_incremental<E>(ops: &[Op], bound: usize) -> Result<(), TestCaseError>
where
    E: pb::BoundUpper + Default + FromIterator<(Lit, usize)> + EncodeStats,
{
    let (mut cls, terms, mut enc, mut vm) = run_ops::<E>(ops, 6);
    if terms.is_empty() {
        return Ok(());
    }
    let lits: Vec<Lit> = terms.iter().map(|&(l, _)| l).collect();
    // a bound outside the encoded range must be reported, not silently wrong
    if let Err(err) = enc.enforce_ub(bound) {
        prop_assert_eq!(err, Error::NotEncoded);
    }
    enc.encode_ub(bound..=bound, &mut cls, &mut vm).unwrap();
    prop_assert_eq!(enc.n_clauses(), cls.len());
    let assumps = enc.enforce_ub(bound).unwrap();

    let mut scratch: E = terms.iter().copied().collect();
    let mut scratch_cls = vec![];
    let mut scratch_vm = vm_after(6);
    scratch.encode_ub(bound..=bound, &mut scratch_cls, &mut scratch_vm).unwrap();
    let scratch_assumps = scratch.enforce_ub(bound).unwrap();

    let mut inc = Extension::new(&cls);
    let mut fresh = Extension::new(&scratch_cls);
    for cube in cubes(&lits) {
        let a = inc.sat(&with(&cube, &assumps));
        let b = fresh.sat(&with(&cube, &scratch_assumps));
        prop_assert_eq!(a, b);
        prop_assert_eq!(a, weight_true(&terms, &cube) <= bound);
    }
    Ok(())
}

/// Unit weights through the card interface
#[derive(Default)]
struct UnitTot(Totalizer);

impl Extend<(Lit, usize)> for UnitTot {
    fn extend<I: IntoIterator<Item = (Lit, usize)>>(&mut self, iter: I) {
        self.0.extend(iter.into_iter().map(|(l, _)| l))
    }
}

impl FromIterator<(Lit, usize)> for UnitTot {
    fn from_iter<I: IntoIterator<Item = (Lit, usize)>>(iter: I) -> Self {
        UnitTot(iter.into_iter().map(|(l, _)| l).collect())
    }
}

impl pb::Encode for UnitTot {
    fn n_lits(&self) -> usize {
        card::Encode::n_lits(&self.0)
    }

    fn weight_sum(&self) -> usize {
        card::Encode::n_lits(&self.0)
    }
}

impl pb::BoundUpper for UnitTot {
    fn encode_ub<Col, R>(&mut self, range: R, col: &mut Col, vm: &mut dyn ManageVars) -> Result<(), Error>
    where
        Col: CollectClauses,
        R: std::ops::RangeBounds<usize>,
    {
        card::BoundUpper::encode_ub(&mut self.0, range, col, vm)
    }

    fn enforce_ub(&self, ub: usize) -> Result<Vec<Lit>, Error> {
        card::BoundUpper::enforce_ub(&self.0, ub)
    }
}

impl EncodeStats for UnitTot {
    fn n_clauses(&self) -> usize {
        self.0.n_clauses()
    }

    fn n_vars(&self) -> u32 {
        self.0.n_vars()
    }
}

fn unit_ops() -> impl Strategy<Value = Vec<Op>> {
    ops().prop_map(|ops| {
        ops.into_iter()
            .map(|op| match op {
                Op::Extend(ws) => Op::Extend(vec![1; ws.len()]),
                Op::Encode(lo, hi) => Op::Encode(lo.min(6), hi.min(6)),
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn totalizer_incremental(ops in unit_ops(), bound in 0usize..=7) {
        check_incremental::<UnitTot>(&ops, bound)?;
    }

    #[test]
    fn gte_incremental(ops in ops(), bound in 0usize..=40) {
        check_incremental::<GeneralizedTotalizer>(&ops, bound)?;
    }

    #[test]
    fn dpw_incremental_bounds((terms, k) in weighted(), other in 0usize..=61) {
        // changing the enforced bound on an existing encoding
        let lits: Vec<Lit> = terms.iter().map(|&(l, _)| l).collect();
        let mut enc: DynamicPolyWatchdog = terms.iter().copied().collect();
        let mut cls = vec![];
        let mut vm = vm_after(lits.len());
        pb::BoundUpper::encode_ub(&mut enc, other..=other, &mut cls, &mut vm).unwrap();
        pb::BoundUpper::encode_ub(&mut enc, k..=k, &mut cls, &mut vm).unwrap();
        let assumps = pb::BoundUpper::enforce_ub(&enc, k).unwrap();
        let mut ext = Extension::new(&cls);
        for cube in cubes(&lits) {
            prop_assert_eq!(ext.sat(&with(&cube, &assumps)), weight_true(&terms, &cube) <= k);
        }
    }
}

#[test]
fn totalizer_cumulative_counts_grow() {
    let lits = pos_lits(300);
    let mut prev = 0;
    for k in [1, 2, 10, 50, 150, 299, 300] {
        let mut tot: Totalizer = lits.iter().copied().collect();
        let mut cls = satkit::encodings::ClauseCounter::default();
        let mut vm = vm_after(300);
        card::BoundUpper::encode_ub(&mut tot, 1..=k, &mut cls, &mut vm).unwrap();
        assert!(cls.n_clauses() >= prev);
        prev = cls.n_clauses();
    }
}

#[test]
fn not_encoded_errors() {
    let lits = pos_lits(4);
    let tot: Totalizer = lits.iter().copied().collect();
    assert_eq!(card::BoundUpper::enforce_ub(&tot, 1), Err(Error::NotEncoded));
    let gte: GeneralizedTotalizer = lits.iter().map(|&l| (l, 2)).collect();
    assert_eq!(pb::BoundUpper::enforce_ub(&gte, 3), Err(Error::NotEncoded));
}

#[test]
fn complementary_inputs() {
    let mut tot: Totalizer = [Lit::positive(0), Lit::negative(0)].into_iter().collect();
    let mut cls: Vec<Clause> = vec![];
    let mut vm = vm_after(1);
    assert_eq!(
        card::BoundUpper::encode_ub(&mut tot, 1..=1, &mut cls, &mut vm),
        Err(Error::ComplementaryInputs)
    );
}
