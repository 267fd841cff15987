//! # Basic Types
//!
//! Variables, literals, ternary values and assignments. Higher-level
//! constraints live in [`constraints`].

use std::{fmt, ops};

use thiserror::Error;

pub mod constraints;

pub use constraints::{
    CardConstraint, Clause, PbConstraint, PbNormalized, Relation, Sanitized, WeightOverflow,
};

/// Errors raised when constructing variables or literals
#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeError {
    /// IPASIR and DIMACS reserve `0` as the clause terminator
    #[error("0 is not a valid IPASIR literal")]
    ZeroLiteral,
    /// The variable index does not fit the packed representation
    #[error("variable index {0} exceeds the maximum of {max}", max = Var::MAX_IDX)]
    IndexTooHigh(u64),
}

/// A propositional variable, identified by a 0-based index
#[derive(Hash, Eq, PartialEq, PartialOrd, Ord, Clone, Copy)]
#[repr(transparent)]
pub struct Var {
    idx: u32,
}

impl Var {
    /// The highest representable variable index. Chosen so that the
    /// IPASIR integer of the variable (`idx + 1`) fits into an `i32`.
    pub const MAX_IDX: u32 = (i32::MAX - 1) as u32;

    /// Creates a new variable.
    ///
    /// # Panics
    ///
    /// If `idx > Var::MAX_IDX`. Use [`Var::try_new`] for a checked version.
    pub fn new(idx: u32) -> Var {
        Var::try_new(idx).expect("variable index too high")
    }

    /// Creates a new variable, failing if the index is out of range
    pub fn try_new(idx: u32) -> Result<Var, TypeError> {
        if idx > Var::MAX_IDX {
            return Err(TypeError::IndexTooHigh(idx as u64));
        }
        Ok(Var { idx })
    }

    /// The positive literal of the variable
    #[inline]
    pub fn pos_lit(self) -> Lit {
        Lit::positive(self.idx)
    }

    /// The negative literal of the variable
    #[inline]
    pub fn neg_lit(self) -> Lit {
        Lit::negative(self.idx)
    }

    /// The literal of the variable with the given polarity
    #[inline]
    pub fn lit(self, negated: bool) -> Lit {
        Lit::new(self.idx, negated)
    }

    #[inline]
    pub fn idx(self) -> usize {
        self.idx as usize
    }

    #[inline]
    pub fn idx32(self) -> u32 {
        self.idx
    }

    /// IPASIR/DIMACS integer of the variable (1-based)
    pub fn to_ipasir(self) -> i32 {
        self.idx as i32 + 1
    }
}

impl ops::Add<u32> for Var {
    type Output = Var;

    fn add(self, rhs: u32) -> Var {
        Var::new(self.idx + rhs)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.idx)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.idx)
    }
}

/// A literal, packed as `(var_idx << 1) | negated`, the same memory layout
/// as MiniSat.
#[derive(Hash, Eq, PartialEq, PartialOrd, Ord, Clone, Copy)]
#[repr(transparent)]
pub struct Lit {
    raw: u32,
}

impl Lit {
    /// Creates a literal on variable `idx`.
    ///
    /// # Panics
    ///
    /// If `idx > Var::MAX_IDX`.
    #[inline]
    pub fn new(idx: u32, negated: bool) -> Lit {
        assert!(idx <= Var::MAX_IDX, "variable index too high");
        Lit {
            raw: (idx << 1) | negated as u32,
        }
    }

    #[inline]
    pub fn positive(idx: u32) -> Lit {
        Lit::new(idx, false)
    }

    #[inline]
    pub fn negative(idx: u32) -> Lit {
        Lit::new(idx, true)
    }

    /// Reconstructs a literal from its packed representation
    pub fn from_raw(raw: u32) -> Result<Lit, TypeError> {
        if raw >> 1 > Var::MAX_IDX {
            return Err(TypeError::IndexTooHigh((raw >> 1) as u64));
        }
        Ok(Lit { raw })
    }

    /// Converts an IPASIR/DIMACS integer into a literal. `1` is the positive
    /// literal of variable 0, `-3` the negative literal of variable 2.
    pub fn from_ipasir(val: i32) -> Result<Lit, TypeError> {
        if val == 0 {
            return Err(TypeError::ZeroLiteral);
        }
        let mag = val.unsigned_abs() - 1;
        if mag > Var::MAX_IDX {
            return Err(TypeError::IndexTooHigh(mag as u64));
        }
        Ok(Lit::new(mag, val < 0))
    }

    /// Converts the literal to its IPASIR/DIMACS integer
    pub fn to_ipasir(self) -> i32 {
        let mag = (self.raw >> 1) as i32 + 1;
        if self.is_neg() {
            -mag
        } else {
            mag
        }
    }

    #[inline]
    pub fn raw(self) -> u32 {
        self.raw
    }

    #[inline]
    pub fn var(self) -> Var {
        Var { idx: self.raw >> 1 }
    }

    #[inline]
    pub fn vidx(self) -> usize {
        (self.raw >> 1) as usize
    }

    #[inline]
    pub fn is_neg(self) -> bool {
        self.raw & 1 == 1
    }

    #[inline]
    pub fn is_pos(self) -> bool {
        self.raw & 1 == 0
    }
}

impl ops::Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit { raw: self.raw ^ 1 }
    }
}

impl ops::Neg for Lit {
    type Output = Lit;

    #[inline]
    fn neg(self) -> Lit {
        !self
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg() {
            write!(f, "~{}", self.var())
        } else {
            write!(f, "{}", self.var())
        }
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Creates a positive [`Lit`] from a variable index, or a negative one with
/// a leading `-`.
#[macro_export]
macro_rules! lit {
    (-$idx:expr) => {
        $crate::types::Lit::negative($idx)
    };
    ($idx:expr) => {
        $crate::types::Lit::positive($idx)
    };
}

/// Creates a [`Lit`] from an IPASIR integer, panicking on `0`
#[macro_export]
macro_rules! ipasir_lit {
    ($val:expr) => {
        $crate::types::Lit::from_ipasir($val).unwrap()
    };
}

#[macro_export]
macro_rules! var {
    ($idx:expr) => {
        $crate::types::Var::new($idx)
    };
}

/// Creates a [`Clause`] from a list of literals
#[macro_export]
macro_rules! clause {
    () => {
        $crate::types::Clause::new()
    };
    ($($l:expr),+ $(,)?) => {
        $crate::types::Clause::from([$($l),+])
    };
}

/// A value that is either true, false or unassigned
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Hash)]
pub enum TernaryVal {
    True,
    False,
    #[default]
    DontCare,
}

impl TernaryVal {
    /// Resolves [`TernaryVal::DontCare`] to `def`
    pub fn to_bool_with_def(self, def: bool) -> bool {
        match self {
            TernaryVal::True => true,
            TernaryVal::False => false,
            TernaryVal::DontCare => def,
        }
    }
}

impl From<bool> for TernaryVal {
    fn from(b: bool) -> Self {
        if b {
            TernaryVal::True
        } else {
            TernaryVal::False
        }
    }
}

impl ops::Not for TernaryVal {
    type Output = TernaryVal;

    fn not(self) -> TernaryVal {
        match self {
            TernaryVal::True => TernaryVal::False,
            TernaryVal::False => TernaryVal::True,
            TernaryVal::DontCare => TernaryVal::DontCare,
        }
    }
}

impl fmt::Display for TernaryVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TernaryVal::True => write!(f, "1"),
            TernaryVal::False => write!(f, "0"),
            TernaryVal::DontCare => write!(f, "_"),
        }
    }
}

/// A (partial) assignment of variables, stored densely by variable index.
/// Variables beyond the stored range are [`TernaryVal::DontCare`].
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Assignment {
    values: Vec<TernaryVal>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// An assignment of `n_vars` variables, all unassigned
    pub fn with_vars(n_vars: usize) -> Self {
        Assignment {
            values: vec![TernaryVal::DontCare; n_vars],
        }
    }

    pub fn var_value(&self, var: Var) -> TernaryVal {
        self.values
            .get(var.idx())
            .copied()
            .unwrap_or(TernaryVal::DontCare)
    }

    pub fn lit_value(&self, lit: Lit) -> TernaryVal {
        let val = self.var_value(lit.var());
        if lit.is_neg() {
            !val
        } else {
            val
        }
    }

    pub fn assign_var(&mut self, var: Var, val: TernaryVal) {
        if var.idx() >= self.values.len() {
            if val == TernaryVal::DontCare {
                return;
            }
            self.values.resize(var.idx() + 1, TernaryVal::DontCare);
        }
        self.values[var.idx()] = val;
    }

    /// Assigns the literal's variable so that the literal is true
    pub fn assign_lit(&mut self, lit: Lit) {
        self.assign_var(lit.var(), TernaryVal::from(lit.is_pos()));
    }

    /// The number of variables covered by the dense storage
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The highest variable with a stored value
    pub fn max_var(&self) -> Option<Var> {
        if self.values.is_empty() {
            None
        } else {
            Some(Var::new(self.values.len() as u32 - 1))
        }
    }

    /// Replaces all unassigned variables up to the stored length by false
    pub fn complete(mut self) -> Self {
        for val in &mut self.values {
            if *val == TernaryVal::DontCare {
                *val = TernaryVal::False;
            }
        }
        self
    }

    /// Extends or shrinks the dense storage to exactly `n_vars` variables
    pub fn resize(&mut self, n_vars: usize) {
        self.values.resize(n_vars, TernaryVal::DontCare);
    }

    /// Iterates over all assigned literals (true under the assignment)
    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(idx, val)| match val {
                TernaryVal::True => Some(Lit::positive(idx as u32)),
                TernaryVal::False => Some(Lit::negative(idx as u32)),
                TernaryVal::DontCare => None,
            })
    }

    /// Builds an assignment from IPASIR integers (without `0` terminator)
    pub fn from_ipasir<I: IntoIterator<Item = i32>>(vals: I) -> Result<Self, TypeError> {
        let mut assign = Assignment::new();
        for val in vals {
            assign.assign_lit(Lit::from_ipasir(val)?);
        }
        Ok(assign)
    }

    /// Values of all stored variables as IPASIR integers, unassigned
    /// variables are skipped
    pub fn to_ipasir(&self) -> Vec<i32> {
        self.iter().map(Lit::to_ipasir).collect()
    }
}

impl FromIterator<Lit> for Assignment {
    fn from_iter<T: IntoIterator<Item = Lit>>(iter: T) -> Self {
        let mut assign = Assignment::new();
        iter.into_iter().for_each(|l| assign.assign_lit(l));
        assign
    }
}

impl From<Vec<TernaryVal>> for Assignment {
    fn from(values: Vec<TernaryVal>) -> Self {
        Assignment { values }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for val in &self.values {
            write!(f, "{val}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ipasir_examples() {
        assert_eq!(Lit::from_ipasir(1), Ok(Lit::positive(0)));
        assert_eq!(Lit::from_ipasir(-3), Ok(Lit::negative(2)));
        assert_eq!(Lit::from_ipasir(0), Err(TypeError::ZeroLiteral));
        assert_eq!(Lit::negative(0).to_ipasir(), -1);
        assert_eq!(Lit::positive(41).to_ipasir(), 42);
        assert_eq!(Lit::from_raw(7).unwrap().to_ipasir(), -4);
    }

    #[test]
    fn ipasir_extremes() {
        assert!(matches!(
            Lit::from_ipasir(i32::MIN),
            Err(TypeError::IndexTooHigh(_))
        ));
        let l = Lit::from_ipasir(i32::MAX).unwrap();
        assert_eq!(l.to_ipasir(), i32::MAX);
        assert_eq!(Lit::from_ipasir(-i32::MAX).unwrap().to_ipasir(), -i32::MAX);
        assert!(Var::try_new(Var::MAX_IDX + 1).is_err());
        assert!(Lit::from_raw(u32::MAX).is_err());
    }

    #[test]
    fn packing() {
        let l = Lit::new(3, true);
        assert_eq!(l.raw(), 7);
        assert_eq!(l.var(), Var::new(3));
        assert!(l.is_neg());
        assert_eq!(!!l, l);
        assert_eq!(format!("{}", l), "~x3");
    }

    #[test]
    fn ternary_neg() {
        assert_eq!(!TernaryVal::True, TernaryVal::False);
        assert_eq!(!TernaryVal::False, TernaryVal::True);
        assert_eq!(!TernaryVal::DontCare, TernaryVal::DontCare);
    }

    #[test]
    fn assignment_values() {
        let assign = Assignment::from_ipasir([1, -3]).unwrap();
        assert_eq!(assign.lit_value(lit![0]), TernaryVal::True);
        assert_eq!(assign.lit_value(lit![-0]), TernaryVal::False);
        assert_eq!(assign.var_value(var![1]), TernaryVal::DontCare);
        assert_eq!(assign.lit_value(lit![-2]), TernaryVal::True);
        assert_eq!(assign.var_value(var![10]), TernaryVal::DontCare);
        assert_eq!(assign.to_ipasir(), vec![1, -3]);
        assert_eq!(assign.complete().to_ipasir(), vec![1, -2, -3]);
    }

    proptest! {
        #[test]
        fn ipasir_roundtrip(val in (1..=i32::MAX).prop_union(-i32::MAX..=-1)) {
            prop_assert_eq!(Lit::from_ipasir(val).unwrap().to_ipasir(), val);
        }

        #[test]
        fn negation_flips_low_bit(idx in 0..=Var::MAX_IDX, neg: bool) {
            let l = Lit::new(idx, neg);
            prop_assert_eq!((!l).raw(), l.raw() ^ 1);
            prop_assert_eq!(!!l, l);
            prop_assert_eq!(l.raw() >> 1, idx);
        }

        #[test]
        fn assignment_lit_negation(vals in proptest::collection::vec(0u8..3, 0..20), idx in 0u32..25) {
            let assign: Assignment = vals
                .into_iter()
                .map(|v| match v {
                    0 => TernaryVal::False,
                    1 => TernaryVal::True,
                    _ => TernaryVal::DontCare,
                })
                .collect::<Vec<_>>()
                .into();
            prop_assert_eq!(assign.lit_value(lit![idx]), !assign.lit_value(lit![-idx]));
        }
    }
}
