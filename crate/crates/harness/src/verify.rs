//! Equivalence of a learned network and the target of an instance file.

use std::time::Duration;

use acqlab_core::model::{Constraint, Instance, InstanceFile};
use acqlab_core::solver::{Entailment, SearchConfig, Solver};

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    /// Target ⊨ learned: nothing learned rejects a solution.
    pub sound: Entailment,
    /// Learned ⊨ target: every non-solution is rejected.
    pub complete: Entailment,
}

impl Verification {
    pub fn equivalent(&self) -> bool {
        self.sound.holds() && self.complete.holds()
    }

    pub fn undecided(&self) -> bool {
        matches!(self.sound, Entailment::Unknown(_)) || matches!(self.complete, Entailment::Unknown(_))
    }
}

pub fn verify_networks(instance: &Instance, learned: &[Constraint], budget: Duration) -> Result<Verification, HarnessError> {
    let target = instance.target.as_deref().ok_or(HarnessError::NoTarget)?;
    let mut solver = Solver::new(SearchConfig::default());
    let (complete, sound) = solver.equivalence(&instance.vocab, learned, target, budget);
    Ok(Verification { sound, complete })
}

/// Reads an instance document that carries both `target` and `learned`.
pub fn verify_file(file: &InstanceFile, budget: Duration) -> Result<Verification, HarnessError> {
    let instance = Instance::from_file(file)?;
    let specs = file.learned.as_ref().ok_or_else(|| HarnessError::Config("instance has no `learned` network".into()))?;
    let learned = specs.iter().map(|s| s.to_constraint(&instance.vocab)).collect::<Result<Vec<_>, _>>()?;
    verify_networks(&instance, &learned, budget)
}

pub fn describe(v: &Verification) -> String {
    let side = |e: &Entailment, what: &str| match e {
        Entailment::Holds => format!("{what}: ok"),
        Entailment::Fails { constraint, witness } => format!("{what}: fails on {constraint} (witness {witness})"),
        Entailment::Unknown(c) => format!("{what}: undecided on {c} (budget exhausted)"),
    };
    format!("{}\n{}", side(&v.sound, "learned within target"), side(&v.complete, "target within learned"))
}
