use std::fmt;

use fixedbitset::FixedBitSet;

use super::Var;

/// A set of variables, stored as a bitset sized to the vocabulary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet(FixedBitSet);

impl VarSet {
    pub fn empty(capacity: usize) -> Self {
        VarSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        VarSet(bits)
    }

    pub fn from_vars(capacity: usize, vars: impl IntoIterator<Item = Var>) -> Self {
        let mut set = Self::empty(capacity);
        for v in vars {
            set.insert(v);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: Var) {
        if v >= self.0.len() {
            self.0.grow(v + 1);
        }
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: Var) {
        if v < self.0.len() {
            self.0.set(v, false);
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Var> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<Var> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_strict_subset(&self, other: &VarSet) -> bool {
        self.is_subset(other) && self.len() < other.len()
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &VarSet) {
        if other.0.len() > self.0.len() {
            self.0.grow(other.0.len());
        }
        self.0.union_with(&other.0);
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        let mut out = self.clone();
        out.0.difference_with(&other.0);
        out
    }

    pub fn without(&self, v: Var) -> VarSet {
        let mut out = self.clone();
        out.remove(v);
        out
    }

    /// Splits into the first `ceil(len / 2)` members (ascending) and the rest.
    pub fn split_half(&self) -> (VarSet, VarSet) {
        let members = self.to_vec();
        let cut = members.len().div_ceil(2);
        let cap = self.capacity();
        (
            VarSet::from_vars(cap, members[..cut].iter().copied()),
            VarSet::from_vars(cap, members[cut..].iter().copied()),
        )
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "x{v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_puts_ceiling_half_first() {
        let y = VarSet::full(7);
        let (a, b) = y.split_half();
        assert_eq!(a.to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(b.to_vec(), vec![4, 5, 6]);
    }

    #[test]
    fn equality_ignores_nothing_but_members() {
        let a = VarSet::from_vars(8, [1, 3]);
        let b = VarSet::from_vars(8, [3, 1]);
        assert_eq!(a, b);
        assert!(a.is_subset(&VarSet::full(8)));
        assert!(a.is_strict_subset(&VarSet::from_vars(8, [1, 2, 3])));
        assert!(!a.is_strict_subset(&b));
    }
}
