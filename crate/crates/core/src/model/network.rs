use indexmap::IndexSet;

use super::{Assignment, Constraint, Eval};

/// The learned network `C_L`: an insertion-ordered, duplicate-free constraint set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LearnedNetwork {
    constraints: IndexSet<Constraint>,
}

impl LearnedNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c`; returns false when it was already learned.
    pub fn add(&mut self, c: Constraint) -> bool {
        self.constraints.insert(c)
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.constraints.contains(c)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    pub fn to_vec(&self) -> Vec<Constraint> {
        self.constraints.iter().cloned().collect()
    }

    /// True when no member with a fully assigned scope is violated.
    pub fn accepts(&self, e: &Assignment) -> bool {
        self.constraints.iter().all(|c| c.evaluate(e) != Eval::Violated)
    }
}

impl FromIterator<Constraint> for LearnedNetwork {
    fn from_iter<T: IntoIterator<Item = Constraint>>(iter: T) -> Self {
        LearnedNetwork { constraints: iter.into_iter().collect() }
    }
}
