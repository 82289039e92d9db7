use rand::seq::SliceRandom;

use super::trace::{CallReturn, Routine};
use super::{Acquirer, Step};
use crate::model::{Assignment, Constraint, VarSet};
use crate::oracle::{Oracle, QuerySite};
use crate::solver::Implication;

/// What FindC settled on for a scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Found {
    /// A target constraint to add to the learned network.
    New(Constraint),
    /// The learned network already entails a constraint on the scope that
    /// rejects the example. Happens once the example predates the latest
    /// learned constraints; nothing new is learned.
    Entailed(Constraint),
}

impl Found {
    pub fn constraint(&self) -> &Constraint {
        match self {
            Found::New(c) | Found::Entailed(c) => c,
        }
    }
}

impl<O: Oracle> Acquirer<'_, O> {
    /// Picks the target constraint on scope `y` that rejects `e`, or `None`
    /// when the bias holds no candidate (the run collapses).
    pub fn find_c(&mut self, e: &Assignment, y: &VarSet) -> Step<Option<Found>> {
        self.tracer.enter(Routine::FindC, Vec::new(), y.to_vec(), Vec::new());
        let out = self.find_c_inner(e, y);
        if let Ok(c) = &out {
            self.tracer.exit(CallReturn::Constraint(c.as_ref().map(|c| c.constraint().to_string())));
        }
        out
    }

    fn find_c_inner(&mut self, e: &Assignment, y: &VarSet) -> Step<Option<Found>> {
        let e_y = e.project(y);
        if let Some(c) = self.known.on_scope(y).into_iter().find(|c| c.is_violated_by(&e_y)) {
            return Ok(Some(Found::Entailed(c)));
        }
        let implied = self.remove_implied_on(y);
        if let Some(c) = implied.into_iter().find(|c| c.is_violated_by(&e_y)) {
            return Ok(Some(Found::Entailed(c)));
        }
        let mut delta: Vec<Constraint> = self.bias.on_scope(y).into_iter().filter(|c| c.is_violated_by(&e_y)).collect();
        if delta.is_empty() {
            return Ok(None);
        }
        loop {
            let Some(probe) = self.solver.gen_discriminating(self.vocab, &self.hard, &delta, y) else {
                return Ok(delta.choose(&mut self.rng).cloned().map(Found::New));
            };
            if self.ask(&probe, QuerySite::FindC)? {
                self.bias.remove_violated(&probe);
                delta.retain(|c| !c.is_violated_by(&probe));
            } else {
                delta.retain(|c| c.is_violated_by(&probe));
            }
        }
    }

    /// Drops and returns the bias constraints on `y` that the learned
    /// network entails. An inconclusive check keeps the constraint.
    fn remove_implied_on(&mut self, y: &VarSet) -> Vec<Constraint> {
        let budget = self.config.implied_budget.unwrap_or(self.config.search.cut_max);
        let mut removed = Vec::new();
        for c in self.bias.on_scope(y) {
            if self.solver.is_implied(self.vocab, &self.learned_vec, &c, budget) == Implication::Implied {
                self.bias.remove(&c);
                self.add_known(c.clone());
                removed.push(c);
            }
        }
        removed
    }
}
