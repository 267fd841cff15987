//! # Instances
//!
//! Containers for satisfiability and optimization instances, and variable
//! managers handing out fresh variables.

use std::{collections::HashMap, hash::Hash};

use thiserror::Error;

use crate::types::{Var, WeightOverflow};

mod opt;
mod sat;

pub use opt::{Objective, OptInstance};
pub use sat::{Am1Encoding, CardEncoding, Cnf, EncodingConfig, PbEncoding, SatInstance};

/// Errors from building or converting instances
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("the variable space is exhausted")]
    OutOfVars,
    #[error("soft weights must be strictly positive")]
    ZeroWeight,
    #[error(transparent)]
    WeightOverflow(#[from] WeightOverflow),
    #[error("encoding failed: {0}")]
    Encoding(#[from] crate::encodings::Error),
}

/// Capability of handing out fresh variables
pub trait ManageVars {
    /// Gets a variable that has not been used so far
    fn try_new_var(&mut self) -> Result<Var, InstanceError>;

    /// Gets a variable that has not been used so far.
    ///
    /// # Panics
    ///
    /// If the variable space is exhausted.
    fn new_var(&mut self) -> Var {
        self.try_new_var().expect("variable space exhausted")
    }

    /// Marks all variables up to and including `var` as used. Returns `true`
    /// if this changed the manager's state.
    fn mark_used(&mut self, var: Var) -> bool;

    /// The highest used variable, if any
    fn max_var(&self) -> Option<Var>;

    /// The number of used variables (highest index + 1)
    fn n_used(&self) -> u32;
}

/// Variable manager that only tracks the next free variable index
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BasicVarManager {
    next_free: u32,
}

impl BasicVarManager {
    /// A manager whose first fresh variable is `next_free`
    pub fn from_next_free(next_free: Var) -> Self {
        BasicVarManager {
            next_free: next_free.idx32(),
        }
    }
}

impl ManageVars for BasicVarManager {
    fn try_new_var(&mut self) -> Result<Var, InstanceError> {
        let var = Var::try_new(self.next_free).map_err(|_| InstanceError::OutOfVars)?;
        self.next_free += 1;
        Ok(var)
    }

    fn mark_used(&mut self, var: Var) -> bool {
        if var.idx32() >= self.next_free {
            self.next_free = var.idx32() + 1;
            true
        } else {
            false
        }
    }

    fn max_var(&self) -> Option<Var> {
        self.next_free.checked_sub(1).map(Var::new)
    }

    fn n_used(&self) -> u32 {
        self.next_free
    }
}

/// Variable manager that additionally maintains a bijection between client
/// keys and variables
#[derive(Clone, Debug)]
pub struct ObjectVarManager<K> {
    base: BasicVarManager,
    key_to_var: HashMap<K, Var>,
    var_to_key: HashMap<Var, K>,
}

impl<K> Default for ObjectVarManager<K> {
    fn default() -> Self {
        ObjectVarManager {
            base: BasicVarManager::default(),
            key_to_var: HashMap::new(),
            var_to_key: HashMap::new(),
        }
    }
}

impl<K: Hash + Eq + Clone> ObjectVarManager<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Gets the variable for `key`, creating one on first lookup
    pub fn object_var(&mut self, key: K) -> Var {
        if let Some(&var) = self.key_to_var.get(&key) {
            return var;
        }
        let var = self.base.new_var();
        self.key_to_var.insert(key.clone(), var);
        self.var_to_key.insert(var, key);
        var
    }

    /// The variable registered for `key`, if any
    pub fn var_of(&self, key: &K) -> Option<Var> {
        self.key_to_var.get(key).copied()
    }

    /// The key registered for `var`, if any
    pub fn key_of(&self, var: Var) -> Option<&K> {
        self.var_to_key.get(&var)
    }

    pub fn n_objects(&self) -> usize {
        self.key_to_var.len()
    }
}

impl<K> ManageVars for ObjectVarManager<K> {
    fn try_new_var(&mut self) -> Result<Var, InstanceError> {
        self.base.try_new_var()
    }

    fn mark_used(&mut self, var: Var) -> bool {
        self.base.mark_used(var)
    }

    fn max_var(&self) -> Option<Var> {
        self.base.max_var()
    }

    fn n_used(&self) -> u32 {
        self.base.n_used()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::var;
    use std::collections::HashSet;

    #[test]
    fn basic_fresh() {
        let mut vm = BasicVarManager::default();
        assert_eq!(vm.max_var(), None);
        assert_eq!(vm.new_var(), var![0]);
        assert_eq!(vm.new_var(), var![1]);
        let mut vm = BasicVarManager::default();
        vm.mark_used(var![5]);
        assert_eq!(vm.new_var(), var![6]);
        assert!(!vm.mark_used(var![3]));
    }

    #[test]
    fn basic_exhaustion() {
        let mut vm = BasicVarManager::from_next_free(var![Var::MAX_IDX]);
        assert_eq!(vm.try_new_var(), Ok(var![Var::MAX_IDX]));
        assert_eq!(vm.try_new_var(), Err(InstanceError::OutOfVars));
    }

    #[test]
    fn object_bijection() {
        let mut vm = ObjectVarManager::new();
        let a = vm.object_var("a");
        assert_eq!(vm.object_var("a"), a);
        let b = vm.object_var("b");
        assert_ne!(a, b);
        assert_eq!(vm.key_of(b), Some(&"b"));
        assert_eq!(vm.var_of(&"a"), Some(a));
        let fresh = vm.new_var();
        assert!(fresh != a && fresh != b);
        assert_eq!(vm.key_of(fresh), None);
    }

    #[test]
    fn freshness_trace() {
        let mut vm = BasicVarManager::default();
        let marked = [var![3], var![17], var![9]];
        for &v in &marked {
            vm.mark_used(v);
        }
        let fresh: HashSet<Var> = (0..100).map(|_| vm.new_var()).collect();
        assert_eq!(fresh.len(), 100);
        assert!(fresh.iter().all(|v| v.idx() > 17));
    }
}
