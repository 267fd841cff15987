//! # Constraint Types
//!
//! Clauses, cardinality and pseudo-Boolean constraints.

use std::{collections::HashMap, fmt, ops};

use thiserror::Error;

use super::{Assignment, Lit, TernaryVal, Var};

/// A disjunction of literals. Literal order is insertion order and is never
/// changed implicitly.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

/// Outcome of [`Clause::sanitize`]
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Sanitized {
    /// The clause contains a literal and its negation
    Tautology,
    Clause(Clause),
}

impl Clause {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        Clause {
            lits: Vec::with_capacity(cap),
        }
    }

    pub fn add(&mut self, lit: Lit) {
        self.lits.push(lit);
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lits.len() == 1
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Lit> {
        self.lits.iter()
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn into_lits(self) -> Vec<Lit> {
        self.lits
    }

    /// Removes duplicate literals (keeping the first occurrence) and detects
    /// tautologies. The empty clause is returned unchanged.
    pub fn sanitize(self) -> Sanitized {
        let mut seen: HashMap<Var, bool> = HashMap::with_capacity(self.lits.len());
        let mut lits = Vec::with_capacity(self.lits.len());
        for lit in self.lits {
            match seen.get(&lit.var()) {
                Some(&neg) if neg == lit.is_neg() => {}
                Some(_) => return Sanitized::Tautology,
                None => {
                    seen.insert(lit.var(), lit.is_neg());
                    lits.push(lit);
                }
            }
        }
        Sanitized::Clause(Clause { lits })
    }

    /// Evaluates the clause under a (partial) assignment
    pub fn evaluate(&self, assign: &Assignment) -> TernaryVal {
        let mut undecided = false;
        for &lit in &self.lits {
            match assign.lit_value(lit) {
                TernaryVal::True => return TernaryVal::True,
                TernaryVal::DontCare => undecided = true,
                TernaryVal::False => {}
            }
        }
        if undecided {
            TernaryVal::DontCare
        } else {
            TernaryVal::False
        }
    }

    /// The highest variable in the clause
    pub fn max_var(&self) -> Option<Var> {
        self.lits.iter().map(|l| l.var()).max()
    }
}

impl ops::Deref for Clause {
    type Target = [Lit];

    fn deref(&self) -> &[Lit] {
        &self.lits
    }
}

impl From<&[Lit]> for Clause {
    fn from(lits: &[Lit]) -> Self {
        Clause {
            lits: lits.to_vec(),
        }
    }
}

impl From<Vec<Lit>> for Clause {
    fn from(lits: Vec<Lit>) -> Self {
        Clause { lits }
    }
}

impl<const N: usize> From<[Lit; N]> for Clause {
    fn from(lits: [Lit; N]) -> Self {
        Clause {
            lits: lits.to_vec(),
        }
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<T: IntoIterator<Item = Lit>>(iter: T) -> Self {
        Clause {
            lits: iter.into_iter().collect(),
        }
    }
}

impl Extend<Lit> for Clause {
    fn extend<T: IntoIterator<Item = Lit>>(&mut self, iter: T) {
        self.lits.extend(iter)
    }
}

impl IntoIterator for Clause {
    type Item = Lit;
    type IntoIter = std::vec::IntoIter<Lit>;

    fn into_iter(self) -> Self::IntoIter {
        self.lits.into_iter()
    }
}

impl<'a> IntoIterator for &'a Clause {
    type Item = &'a Lit;
    type IntoIter = std::slice::Iter<'a, Lit>;

    fn into_iter(self) -> Self::IntoIter {
        self.lits.iter()
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, lit) in self.lits.iter().enumerate() {
            if idx > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// Relational operator of a cardinality or pseudo-Boolean constraint
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Relation {
    /// Upper bound, `<=`
    Le,
    /// Lower bound, `>=`
    Ge,
    /// Equality, `=`
    Eq,
}

impl Relation {
    pub fn holds<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Le => write!(f, "<="),
            Relation::Ge => write!(f, ">="),
            Relation::Eq => write!(f, "="),
        }
    }
}

/// Bound on the number of true literals in a sequence. Literals may repeat,
/// each occurrence counts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CardConstraint {
    lits: Vec<Lit>,
    relation: Relation,
    bound: usize,
}

impl CardConstraint {
    pub fn new<I: IntoIterator<Item = Lit>>(lits: I, relation: Relation, bound: usize) -> Self {
        CardConstraint {
            lits: lits.into_iter().collect(),
            relation,
            bound,
        }
    }

    pub fn new_ub<I: IntoIterator<Item = Lit>>(lits: I, bound: usize) -> Self {
        Self::new(lits, Relation::Le, bound)
    }

    pub fn new_lb<I: IntoIterator<Item = Lit>>(lits: I, bound: usize) -> Self {
        Self::new(lits, Relation::Ge, bound)
    }

    pub fn new_eq<I: IntoIterator<Item = Lit>>(lits: I, bound: usize) -> Self {
        Self::new(lits, Relation::Eq, bound)
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Whether every assignment satisfies the constraint
    pub fn is_tautology(&self) -> bool {
        match self.relation {
            Relation::Le => self.bound >= self.lits.len(),
            Relation::Ge => self.bound == 0,
            Relation::Eq => self.bound == 0 && self.lits.is_empty(),
        }
    }

    /// Whether no assignment satisfies the constraint (judged on the bound
    /// alone)
    pub fn is_unsat(&self) -> bool {
        match self.relation {
            Relation::Le => false,
            Relation::Ge | Relation::Eq => self.bound > self.lits.len(),
        }
    }

    /// Whether a literal occurs together with its negation
    pub fn has_complementary_lits(&self) -> bool {
        let mut seen: HashMap<Var, bool> = HashMap::new();
        for &l in &self.lits {
            if let Some(&neg) = seen.get(&l.var()) {
                if neg != l.is_neg() {
                    return true;
                }
            } else {
                seen.insert(l.var(), l.is_neg());
            }
        }
        false
    }

    /// Evaluates the constraint under a total assignment of its variables.
    /// Returns `DontCare` if some literal is unassigned.
    pub fn evaluate(&self, assign: &Assignment) -> TernaryVal {
        let mut count = 0;
        for &l in &self.lits {
            match assign.lit_value(l) {
                TernaryVal::True => count += 1,
                TernaryVal::False => {}
                TernaryVal::DontCare => return TernaryVal::DontCare,
            }
        }
        self.relation.holds(count, self.bound).into()
    }

    /// Converts into a pseudo-Boolean constraint with unit weights
    pub fn into_pb(self) -> PbConstraint {
        PbConstraint::new(
            self.lits.into_iter().map(|l| (l, 1)),
            self.relation,
            self.bound as i64,
        )
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.iter().map(|l| l.var()).max()
    }
}

/// Error raised when normalization overflows 64-bit integers
#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
#[error("weight overflow while normalizing a pseudo-Boolean constraint")]
pub struct WeightOverflow;

/// A linear constraint `sum(coef * lit) <rel> bound`. Coefficients may be
/// negative or repeated until the constraint is normalized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PbConstraint {
    terms: Vec<(Lit, i64)>,
    relation: Relation,
    bound: i64,
}

/// Outcome of [`PbConstraint::normalize`]
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PbNormalized {
    TriviallyTrue,
    TriviallyFalse,
    Constraint(PbConstraint),
}

impl PbConstraint {
    pub fn new<I: IntoIterator<Item = (Lit, i64)>>(terms: I, relation: Relation, bound: i64) -> Self {
        PbConstraint {
            terms: terms.into_iter().collect(),
            relation,
            bound,
        }
    }

    pub fn new_ub<I: IntoIterator<Item = (Lit, i64)>>(terms: I, bound: i64) -> Self {
        Self::new(terms, Relation::Le, bound)
    }

    pub fn new_lb<I: IntoIterator<Item = (Lit, i64)>>(terms: I, bound: i64) -> Self {
        Self::new(terms, Relation::Ge, bound)
    }

    pub fn new_eq<I: IntoIterator<Item = (Lit, i64)>>(terms: I, bound: i64) -> Self {
        Self::new(terms, Relation::Eq, bound)
    }

    pub fn terms(&self) -> &[(Lit, i64)] {
        &self.terms
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients, failing on overflow
    pub fn weight_sum(&self) -> Result<i64, WeightOverflow> {
        self.terms
            .iter()
            .try_fold(0i64, |sum, &(_, w)| sum.checked_add(w))
            .ok_or(WeightOverflow)
    }

    /// Whether all coefficients are equal (and positive). Such constraints
    /// can be handled as cardinality constraints.
    pub fn is_card(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(&(_, w0)) => w0 > 0 && self.terms.iter().all(|&(_, w)| w == w0),
        }
    }

    /// Brings the constraint into normal form: variables are unique (in
    /// first-occurrence order), all coefficients are strictly positive, and
    /// trivially true or false constraints are detected. Negative
    /// coefficients are removed by negating the literal and shifting the
    /// bound, and a literal together with its negation is cancelled against
    /// the bound.
    pub fn normalize(self) -> Result<PbNormalized, WeightOverflow> {
        // coefficient of the positive literal per variable, in first-occurrence order
        let mut order: Vec<Var> = Vec::with_capacity(self.terms.len());
        let mut coefs: HashMap<Var, i64> = HashMap::with_capacity(self.terms.len());
        let mut bound = self.bound;
        for (lit, coef) in self.terms {
            let entry = coefs.entry(lit.var()).or_insert_with(|| {
                order.push(lit.var());
                0
            });
            if lit.is_pos() {
                *entry = entry.checked_add(coef).ok_or(WeightOverflow)?;
            } else {
                // c * ~x = c - c * x
                *entry = entry.checked_sub(coef).ok_or(WeightOverflow)?;
                bound = bound.checked_sub(coef).ok_or(WeightOverflow)?;
            }
        }
        let mut terms = Vec::with_capacity(order.len());
        let mut sum: i64 = 0;
        for var in order {
            let coef = coefs[&var];
            if coef == 0 {
                continue;
            }
            let term = if coef > 0 {
                (var.pos_lit(), coef)
            } else {
                // c * x with c < 0 equals -c * ~x + c
                let pos = coef.checked_neg().ok_or(WeightOverflow)?;
                bound = bound.checked_add(pos).ok_or(WeightOverflow)?;
                (var.neg_lit(), pos)
            };
            sum = sum.checked_add(term.1).ok_or(WeightOverflow)?;
            terms.push(term);
        }
        let outcome = match self.relation {
            Relation::Le if bound < 0 => PbNormalized::TriviallyFalse,
            Relation::Le if bound >= sum => PbNormalized::TriviallyTrue,
            Relation::Ge if bound <= 0 => PbNormalized::TriviallyTrue,
            Relation::Ge if bound > sum => PbNormalized::TriviallyFalse,
            Relation::Eq if bound < 0 || bound > sum => PbNormalized::TriviallyFalse,
            Relation::Eq if terms.is_empty() => PbNormalized::TriviallyTrue,
            relation => PbNormalized::Constraint(PbConstraint {
                terms,
                relation,
                bound,
            }),
        };
        Ok(outcome)
    }

    /// Evaluates the constraint under a total assignment of its variables.
    /// Returns `DontCare` if some literal is unassigned.
    pub fn evaluate(&self, assign: &Assignment) -> TernaryVal {
        let mut sum: i128 = 0;
        for &(l, w) in &self.terms {
            match assign.lit_value(l) {
                TernaryVal::True => sum += w as i128,
                TernaryVal::False => {}
                TernaryVal::DontCare => return TernaryVal::DontCare,
            }
        }
        self.relation.holds(sum, self.bound as i128).into()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.iter().map(|(l, _)| l.var()).max()
    }
}

impl fmt::Display for PbConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (lit, w) in &self.terms {
            write!(f, "{w:+} {lit} ")?;
        }
        write!(f, "{} {}", self.relation, self.bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{clause, lit};
    use proptest::prelude::*;

    #[test]
    fn sanitize_examples() {
        assert_eq!(
            clause![lit![1], lit![1], lit![-2]].sanitize(),
            Sanitized::Clause(clause![lit![1], lit![-2]])
        );
        assert_eq!(clause![lit![1], lit![-1]].sanitize(), Sanitized::Tautology);
        assert_eq!(Clause::new().sanitize(), Sanitized::Clause(Clause::new()));
    }

    #[test]
    fn normalize_negative_coef() {
        let pb = PbConstraint::new_ub([(lit![1], -2), (lit![2], 1)], -1);
        assert_eq!(
            pb.normalize(),
            Ok(PbNormalized::Constraint(PbConstraint::new_ub([(lit![-1], 2), (lit![2], 1)], 1)))
        );
    }

    #[test]
    fn normalize_merge() {
        let pb = PbConstraint::new_ub([(lit![1], 2), (lit![1], 3)], 4);
        assert_eq!(
            pb.normalize(),
            Ok(PbNormalized::Constraint(PbConstraint::new_ub([(lit![1], 5)], 4)))
        );
    }

    #[test]
    fn normalize_cancel_trivially_false() {
        let pb = PbConstraint::new_ub([(lit![1], 2), (lit![-1], 2)], 1);
        assert_eq!(pb.normalize(), Ok(PbNormalized::TriviallyFalse));
    }

    #[test]
    fn normalize_trivial_outcomes() {
        let ub = |b| PbConstraint::new_ub([(lit![0], 2), (lit![1], 3)], b).normalize();
        assert_eq!(ub(5), Ok(PbNormalized::TriviallyTrue));
        assert_eq!(ub(-1), Ok(PbNormalized::TriviallyFalse));
        let lb = |b| PbConstraint::new_lb([(lit![0], 2), (lit![1], 3)], b).normalize();
        assert_eq!(lb(0), Ok(PbNormalized::TriviallyTrue));
        assert_eq!(lb(6), Ok(PbNormalized::TriviallyFalse));
        let eq = |b| PbConstraint::new_eq([(lit![0], 2), (lit![1], 3)], b).normalize();
        assert_eq!(eq(6), Ok(PbNormalized::TriviallyFalse));
        assert!(matches!(eq(5), Ok(PbNormalized::Constraint(_))));
        assert_eq!(
            PbConstraint::new_eq([], 0).normalize(),
            Ok(PbNormalized::TriviallyTrue)
        );
    }

    #[test]
    fn normalize_overflow() {
        let pb = PbConstraint::new_ub([(lit![0], i64::MAX), (lit![0], 1)], 1);
        assert_eq!(pb.normalize(), Err(WeightOverflow));
        let pb = PbConstraint::new_ub([(lit![0], i64::MAX), (lit![1], 1)], 1);
        assert_eq!(pb.normalize(), Err(WeightOverflow));
    }

    #[test]
    fn card_trivial() {
        let lits = [lit![0], lit![1]];
        assert!(CardConstraint::new_ub(lits, 2).is_tautology());
        assert!(!CardConstraint::new_ub(lits, 1).is_tautology());
        assert!(CardConstraint::new_lb(lits, 0).is_tautology());
        assert!(CardConstraint::new_lb(lits, 3).is_unsat());
        assert!(CardConstraint::new_ub([lit![0], lit![-0]], 1).has_complementary_lits());
    }

    fn assignments(n_vars: u32) -> impl Iterator<Item = Assignment> {
        (0..1u32 << n_vars).map(move |bits| {
            (0..n_vars)
                .map(|v| Lit::new(v, bits & (1 << v) == 0))
                .collect()
        })
    }

    fn arb_pb() -> impl Strategy<Value = PbConstraint> {
        let term = (0u32..6, any::<bool>(), -8i64..=8).prop_map(|(v, n, w)| (Lit::new(v, n), w));
        let rel = prop_oneof![Just(Relation::Le), Just(Relation::Ge), Just(Relation::Eq)];
        (proptest::collection::vec(term, 0..7), rel, -10i64..=20)
            .prop_map(|(terms, rel, b)| PbConstraint::new(terms, rel, b))
    }

    proptest! {
        #[test]
        fn normalize_preserves_models(pb in arb_pb()) {
            let norm = pb.clone().normalize().unwrap();
            for assign in assignments(6) {
                let expected = pb.evaluate(&assign);
                let got = match &norm {
                    PbNormalized::TriviallyTrue => TernaryVal::True,
                    PbNormalized::TriviallyFalse => TernaryVal::False,
                    PbNormalized::Constraint(c) => {
                        prop_assert!(c.terms().iter().all(|&(_, w)| w > 0));
                        c.evaluate(&assign)
                    }
                };
                prop_assert_eq!(expected, got);
            }
        }

        #[test]
        fn normalize_idempotent(pb in arb_pb()) {
            if let PbNormalized::Constraint(c) = pb.normalize().unwrap() {
                prop_assert_eq!(
                    c.clone().normalize().unwrap(),
                    PbNormalized::Constraint(c)
                );
            }
        }

        #[test]
        fn sanitize_preserves_models(lits in proptest::collection::vec((0u32..5, any::<bool>()), 0..8)) {
            let cl: Clause = lits.into_iter().map(|(v, n)| Lit::new(v, n)).collect();
            let sanitized = cl.clone().sanitize();
            for assign in assignments(5) {
                let expected = cl.evaluate(&assign);
                let got = match &sanitized {
                    Sanitized::Tautology => TernaryVal::True,
                    Sanitized::Clause(c) => c.evaluate(&assign),
                };
                prop_assert_eq!(expected, got);
            }
        }
    }
}
