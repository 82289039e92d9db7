use std::collections::HashMap;

use indexmap::IndexSet;

use super::{Assignment, Constraint, Eval, Relation, Var, VarSet, Vocabulary};

/// The candidate constraint set `B`, indexed by variable and by scope.
///
/// Constraints live in slots that are never reused, so slot order is the
/// insertion order and every query over the bias is deterministic.
#[derive(Debug, Clone)]
pub struct Bias {
    n_vars: usize,
    slots: Vec<Option<Constraint>>,
    lookup: HashMap<Constraint, usize>,
    by_var: Vec<IndexSet<usize>>,
    // keyed by the smallest scope variable, so each constraint is visited once by `kappa`
    by_first: Vec<IndexSet<usize>>,
    by_scope: HashMap<VarSet, IndexSet<usize>>,
    live: usize,
}

impl Bias {
    pub fn new(n_vars: usize) -> Self {
        Bias {
            n_vars,
            slots: Vec::new(),
            lookup: HashMap::new(),
            by_var: vec![IndexSet::new(); n_vars],
            by_first: vec![IndexSet::new(); n_vars],
            by_scope: HashMap::new(),
            live: 0,
        }
    }

    pub fn from_constraints(n_vars: usize, constraints: impl IntoIterator<Item = Constraint>) -> Self {
        let mut bias = Bias::new(n_vars);
        for c in constraints {
            bias.insert(c);
        }
        bias
    }

    /// Every canonical instantiation of `language` over the vocabulary.
    ///
    /// Binary relations are placed on every ordered pair and deduplicated after
    /// canonicalization. Quaternary relations get one pairing per ascending
    /// 4-subset `a<b<c<d`: `|x_a - x_b|` against `|x_c - x_d|`.
    pub fn from_language(vocab: &Vocabulary, language: &[Relation]) -> Self {
        let n = vocab.len();
        let mut bias = Bias::new(n);
        for rel in language {
            match rel.arity() {
                2 => {
                    for i in 0..n {
                        for j in 0..n {
                            if i != j {
                                bias.insert(Constraint::new(*rel, &[i, j]).expect("valid pair"));
                            }
                        }
                    }
                }
                4 => {
                    for a in 0..n {
                        for b in a + 1..n {
                            for c in b + 1..n {
                                for d in c + 1..n {
                                    bias.insert(Constraint::new(*rel, &[a, b, c, d]).expect("valid quad"));
                                }
                            }
                        }
                    }
                }
                _ => unreachable!("relations are binary or quaternary"),
            }
        }
        bias
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.lookup.contains_key(c)
    }

    /// Members in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.slots.iter().flatten()
    }

    pub fn to_vec(&self) -> Vec<Constraint> {
        self.iter().cloned().collect()
    }

    /// Adds `c`; returns false if it was already present.
    pub fn insert(&mut self, c: Constraint) -> bool {
        if self.lookup.contains_key(&c) {
            return false;
        }
        let id = self.slots.len();
        for &v in c.scope() {
            self.by_var[v].insert(id);
        }
        self.by_first[c.first_var()].insert(id);
        self.by_scope.entry(c.scope_set(self.n_vars)).or_default().insert(id);
        self.lookup.insert(c.clone(), id);
        self.slots.push(Some(c));
        self.live += 1;
        true
    }

    pub fn remove(&mut self, c: &Constraint) -> bool {
        let Some(id) = self.lookup.remove(c) else {
            return false;
        };
        self.slots[id] = None;
        for &v in c.scope() {
            self.by_var[v].swap_remove(&id);
        }
        self.by_first[c.first_var()].swap_remove(&id);
        let key = c.scope_set(self.n_vars);
        if let Some(set) = self.by_scope.get_mut(&key) {
            set.swap_remove(&id);
            if set.is_empty() {
                self.by_scope.remove(&key);
            }
        }
        self.live -= 1;
        true
    }

    pub fn remove_all<'a>(&mut self, cs: impl IntoIterator<Item = &'a Constraint>) -> usize {
        let removed = cs.into_iter().filter(|c| self.remove(c)).count();
        debug_assert!(self.check_consistency());
        removed
    }

    fn violated_ids(&self, e: &Assignment) -> Vec<usize> {
        let mut ids = Vec::new();
        for v in 0..self.n_vars.min(e.width()) {
            if e.get(v).is_none() {
                continue;
            }
            for &id in &self.by_first[v] {
                let c = self.slots[id].as_ref().expect("indexed slot is live");
                if c.evaluate(e) == Eval::Violated {
                    ids.push(id);
                }
            }
        }
        ids.sort_unstable();
        ids
    }

    /// `κ_B(e)`: members rejecting `e`, in insertion order.
    pub fn kappa(&self, e: &Assignment) -> Vec<Constraint> {
        self.violated_ids(e)
            .into_iter()
            .map(|id| self.slots[id].clone().expect("live"))
            .collect()
    }

    /// `|κ_B(e)|` without materializing the set.
    pub fn kappa_count(&self, e: &Assignment) -> usize {
        let mut count = 0;
        for v in 0..self.n_vars.min(e.width()) {
            if e.get(v).is_none() {
                continue;
            }
            count += self.by_first[v]
                .iter()
                .filter(|&&id| self.slots[id].as_ref().expect("live").evaluate(e) == Eval::Violated)
                .count();
        }
        count
    }

    /// Removes `κ_B(e)` and returns how many constraints went.
    pub fn remove_violated(&mut self, e: &Assignment) -> usize {
        let gone = self.kappa(e);
        self.remove_all(gone.iter())
    }

    /// Members whose scope is exactly `scope`, in insertion order.
    pub fn on_scope(&self, scope: &VarSet) -> Vec<Constraint> {
        let mut ids: Vec<usize> = self.by_scope.get(scope).map(|s| s.iter().copied().collect()).unwrap_or_default();
        ids.sort_unstable();
        ids.into_iter().map(|id| self.slots[id].clone().expect("live")).collect()
    }

    /// Number of members whose scope contains `var` (the bdeg metric).
    pub fn degree(&self, var: Var) -> usize {
        self.by_var[var].len()
    }

    /// Verifies that all three indices agree with the slot table.
    pub fn check_consistency(&self) -> bool {
        let mut live = 0;
        for (id, slot) in self.slots.iter().enumerate() {
            let Some(c) = slot else { continue };
            live += 1;
            if self.lookup.get(c) != Some(&id)
                || !c.scope().iter().all(|&v| self.by_var[v].contains(&id))
                || !self.by_first[c.first_var()].contains(&id)
                || !self.by_scope.get(&c.scope_set(self.n_vars)).is_some_and(|s| s.contains(&id))
            {
                return false;
            }
        }
        let var_refs: usize = self.by_var.iter().map(IndexSet::len).sum();
        let arity_sum: usize = self.iter().map(Constraint::arity).sum();
        let first_refs: usize = self.by_first.iter().map(IndexSet::len).sum();
        let scope_refs: usize = self.by_scope.values().map(IndexSet::len).sum();
        live == self.live
            && self.lookup.len() == live
            && var_refs == arity_sum
            && first_refs == live
            && scope_refs == live
    }
}
