mod common;

use common::{cubes, pos_lits, Extension};
use proptest::prelude::*;
use satkit::{
    instances::{Am1Encoding, BasicVarManager, CardEncoding, EncodingConfig, ManageVars, Objective, PbEncoding, SatInstance},
    types::{
        constraints::{CardConstraint, PbConstraint, Relation},
        Assignment, Clause, Lit, TernaryVal, Var,
    },
};

const N_VARS: u32 = 5;

fn lit() -> impl Strategy<Value = Lit> {
    (0..N_VARS, any::<bool>()).prop_map(|(v, neg)| Lit::new(v, neg))
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![Just(Relation::Le), Just(Relation::Ge), Just(Relation::Eq)]
}

fn card() -> impl Strategy<Value = CardConstraint> {
    (prop::collection::vec(lit(), 0..=6), relation(), 0usize..=7)
        .prop_map(|(lits, rel, bound)| CardConstraint::new(lits, rel, bound))
}

fn pb() -> impl Strategy<Value = PbConstraint> {
    (prop::collection::vec((lit(), -6i64..=8), 0..=5), relation(), -6i64..=20)
        .prop_map(|(terms, rel, bound)| PbConstraint::new(terms, rel, bound))
}

fn config() -> impl Strategy<Value = EncodingConfig> {
    let am1 = prop_oneof![
        Just(Am1Encoding::Auto),
        Just(Am1Encoding::Pairwise),
        Just(Am1Encoding::Ladder),
        Just(Am1Encoding::Bitwise),
        Just(Am1Encoding::Commander),
        Just(Am1Encoding::Bimander),
    ];
    let card = prop_oneof![Just(CardEncoding::Totalizer), Just(CardEncoding::Adder)];
    let pb = prop_oneof![
        Just(PbEncoding::Gte),
        Just(PbEncoding::Adder),
        Just(PbEncoding::Dpw),
        Just(PbEncoding::CardSim),
    ];
    (am1, card, pb).prop_map(|(am1, card, pb)| EncodingConfig { am1, card, pb })
}

fn instance() -> impl Strategy<Value = SatInstance> {
    (
        prop::collection::vec(prop::collection::vec(lit(), 1..=3), 0..=3),
        prop::collection::vec(card(), 0..=2),
        prop::collection::vec(pb(), 0..=2),
    )
        .prop_map(|(cls, cards, pbs)| {
            let mut inst = SatInstance::new();
            inst.var_manager_mut().mark_used(Var::new(N_VARS - 1));
            for cl in cls {
                inst.add_clause(cl.into_iter().collect());
            }
            for c in cards {
                inst.add_card_constr(c);
            }
            for p in pbs {
                inst.add_pb_constr(p);
            }
            inst
        })
}

fn to_assignment(cube: &[Lit]) -> Assignment {
    cube.iter().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn into_cnf_equisatisfiable(inst in instance(), config in config()) {
        let (cnf, vm) = inst.clone().into_cnf_with(config).unwrap();
        // auxiliaries never reuse input variables
        for cl in cnf.iter() {
            for l in cl.iter() {
                prop_assert!(l.var().idx32() < vm.n_used());
            }
        }
        let lits = pos_lits(N_VARS);
        let mut ext = Extension::new(cnf.iter());
        for cube in cubes(&lits) {
            let expected = inst.evaluate(&to_assignment(&cube)) == TernaryVal::True;
            prop_assert_eq!(ext.sat(&cube), expected, "cube {:?}", cube);
        }
    }

    #[test]
    fn relaxation_preserves_cost(
        soft_lits in prop::collection::vec((lit(), 1usize..=9), 0..=3),
        soft_cls in prop::collection::vec((prop::collection::vec(lit(), 0..=3), 1usize..=9), 0..=3),
        offset in -5i64..=5,
    ) {
        let mut obj = Objective::new();
        obj.set_offset(offset);
        for (l, w) in soft_lits {
            obj.add_soft_lit(l, w).unwrap();
        }
        for (cl, w) in soft_cls {
            obj.add_soft_clause(cl.into_iter().collect(), w).unwrap();
        }
        let clausal = obj.clone().into_soft_clauses();
        prop_assert!(clausal.is_clausal());
        let mut vm = BasicVarManager::from_next_free(Var::new(N_VARS));
        let (linear, hards) = obj.clone().into_linear(&mut vm).unwrap();
        prop_assert!(linear.is_linear());
        let n_relax = vm.n_used() - N_VARS;
        let relax = (N_VARS..vm.n_used()).map(Lit::positive).collect::<Vec<_>>();

        for cube in cubes(&pos_lits(N_VARS)) {
            let assign = to_assignment(&cube);
            let cost = obj.cost(&assign).unwrap();
            prop_assert_eq!(clausal.cost(&assign), Some(cost));
            // minimum over relaxation values that satisfy the hard clauses
            let best = cubes(&relax)
                .filter_map(|rcube| {
                    let full: Assignment = cube.iter().chain(&rcube).copied().collect();
                    let ok = hards.iter().all(|cl: &Clause| cl.evaluate(&full) == TernaryVal::True);
                    ok.then(|| linear.cost(&full).unwrap())
                })
                .min();
            prop_assert_eq!(best, Some(cost), "relaxation vars {}", n_relax);
        }
    }
}
