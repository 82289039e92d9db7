//! Backtracking CSP solver and the deadline-bounded query generator.

mod engine;

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Assignment, Bias, Constraint, Var, VarSet, Vocabulary};
use engine::{Deadlines, Engine, Goal, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarHeuristic {
    DomWdeg,
    Bdeg,
    Dom,
    Lex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValHeuristic {
    Random,
    Lex,
    MaxV,
}

/// Complete queries (`max`) or partial queries (`max_B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QGenMode {
    MaxComplete,
    MaxBPartial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub var_heuristic: VarHeuristic,
    pub val_heuristic: ValHeuristic,
    pub cut_min: Duration,
    pub cut_max: Duration,
    pub rng_seed: u64,
    pub mode: QGenMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            var_heuristic: VarHeuristic::DomWdeg,
            val_heuristic: ValHeuristic::Random,
            cut_min: Duration::from_secs(1),
            cut_max: Duration::from_secs(5),
            rng_seed: 0,
            mode: QGenMode::MaxComplete,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("cutoffs must satisfy 0 < cut_min <= cut_max (got {cut_min:?}, {cut_max:?})")]
    Cutoffs { cut_min: Duration, cut_max: Duration },
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.cut_min.is_zero() || self.cut_min > self.cut_max {
            return Err(ConfigError::Cutoffs { cut_min: self.cut_min, cut_max: self.cut_max });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search budget exceeded")]
pub struct BudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGenResult {
    pub example: Option<Assignment>,
    pub violated_count: usize,
    pub hit_cut_min: bool,
    pub hit_cut_max: bool,
    /// No solution of the hard constraints violates any bias constraint.
    pub proven_none: bool,
    /// The per-constraint fallback ran.
    pub used_fallback: bool,
}

impl QGenResult {
    fn none(proven: bool) -> Self {
        QGenResult {
            example: None,
            violated_count: 0,
            hit_cut_min: false,
            hit_cut_max: false,
            proven_none: proven,
            used_fallback: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Implication {
    Implied,
    /// A solution of the network that violates the constraint.
    NotImplied(Assignment),
    Unknown,
}

/// Result of checking that one network entails every constraint of another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entailment {
    Holds,
    /// `witness` satisfies the premises and violates `constraint`.
    Fails { constraint: Constraint, witness: Assignment },
    /// The budget ran out on `constraint`.
    Unknown(Constraint),
}

impl Entailment {
    pub fn holds(&self) -> bool {
        matches!(self, Entailment::Holds)
    }
}

/// Owns the search RNG and the dom/wdeg weights of the learned network.
#[derive(Debug, Clone)]
pub struct Solver {
    config: SearchConfig,
    rng: ChaCha8Rng,
    weights: Vec<u32>,
}

impl Solver {
    pub fn new(config: SearchConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
        Solver { config, rng, weights: Vec::new() }
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    /// Weights follow the learned network; they start over whenever it changes size.
    fn network_weights(&mut self, len: usize) -> &mut Vec<u32> {
        if self.weights.len() != len {
            self.weights = vec![1; len];
        }
        &mut self.weights
    }

    fn deadline(&self, budget: Duration) -> Deadlines {
        Deadlines { cut_min: None, cut_max: Instant::now() + budget }
    }

    /// A complete solution of `constraints`, `None` if proven unsatisfiable,
    /// or `BudgetExceeded` after `cut_max`.
    pub fn solve(&mut self, vocab: &Vocabulary, constraints: &[Constraint]) -> Result<Option<Assignment>, BudgetExceeded> {
        let deadlines = self.deadline(self.config.cut_max);
        let active: Vec<Var> = vocab.vars().collect();
        let weights = self.network_weights(constraints.len());
        let mut weights = std::mem::take(weights);
        let out = Engine::new(
            vocab,
            &active,
            constraints,
            Vec::new(),
            Goal::Satisfy,
            self.config.var_heuristic,
            ValHeuristic::Lex,
            &mut weights,
            &mut self.rng,
            deadlines,
        )
        .run();
        self.weights = weights;
        if out.hit_cut_max {
            Err(BudgetExceeded)
        } else {
            Ok(out.best)
        }
    }

    /// Query generation in the configured mode.
    pub fn qgen(&mut self, vocab: &Vocabulary, hard: &[Constraint], bias: &Bias) -> QGenResult {
        match self.config.mode {
            QGenMode::MaxComplete => self.qgen_complete(vocab, hard, bias),
            QGenMode::MaxBPartial => self.qgen_partial(vocab, hard, bias),
        }
    }

    /// A complete solution of `hard` maximizing the number of violated bias constraints.
    pub fn qgen_complete(&mut self, vocab: &Vocabulary, hard: &[Constraint], bias: &Bias) -> QGenResult {
        self.generate(vocab, hard, bias, Goal::Maximize)
    }

    /// A partial assignment consistent with `hard` maximizing the number of
    /// violated bias constraints.
    pub fn qgen_partial(&mut self, vocab: &Vocabulary, hard: &[Constraint], bias: &Bias) -> QGenResult {
        self.generate(vocab, hard, bias, Goal::MaximizePartial)
    }

    fn generate(&mut self, vocab: &Vocabulary, hard: &[Constraint], bias: &Bias, goal: Goal) -> QGenResult {
        if bias.is_empty() {
            return QGenResult::none(true);
        }
        let start = Instant::now();
        let deadlines = Deadlines { cut_min: Some(start + self.config.cut_min), cut_max: start + self.config.cut_max };
        let active: Vec<Var> = vocab.vars().collect();
        let mut weights = std::mem::take(self.network_weights(hard.len()));
        let out = Engine::new(
            vocab,
            &active,
            hard,
            bias.iter().collect(),
            goal,
            self.config.var_heuristic,
            self.config.val_heuristic,
            &mut weights,
            &mut self.rng,
            deadlines,
        )
        .run();
        self.weights = weights;

        let mut result = QGenResult {
            example: None,
            violated_count: 0,
            hit_cut_min: out.hit_cut_min,
            hit_cut_max: out.hit_cut_max,
            proven_none: false,
            used_fallback: false,
        };
        if let Some(e) = out.best {
            result.violated_count = out.best_violated;
            result.example = Some(e);
            return result;
        }
        // partial search only explores prefixes of its variable order, so an
        // exhausted tree proves nothing there; the per-constraint pass decides
        if out.complete() && goal == Goal::Maximize {
            result.proven_none = true;
            return result;
        }
        // look for any example rejected by a single bias constraint
        result.used_fallback = true;
        let mut all_proven = true;
        for c in bias.iter() {
            let attempt = self.violate_one(vocab, hard, c, goal == Goal::MaximizePartial);
            if let Some(e) = attempt.best {
                result.violated_count = bias.kappa_count(&e);
                result.example = Some(e);
                return result;
            }
            all_proven &= attempt.complete();
        }
        result.proven_none = all_proven;
        result
    }

    /// Searches for a solution of `hard` that violates `c`, over the whole
    /// vocabulary or only over the scope of `c`.
    fn violate_one(&mut self, vocab: &Vocabulary, hard: &[Constraint], c: &Constraint, scope_only: bool) -> Outcome {
        let deadlines = self.deadline(self.config.cut_max);
        let active: Vec<Var> = if scope_only { c.scope().to_vec() } else { vocab.vars().collect() };
        let mut weights = std::mem::take(self.network_weights(hard.len()));
        let out = Engine::new(
            vocab,
            &active,
            hard,
            vec![c],
            Goal::Maximize,
            self.config.var_heuristic,
            ValHeuristic::MaxV,
            &mut weights,
            &mut self.rng,
            deadlines,
        )
        .with_priority(c.scope())
        .run();
        self.weights = weights;
        out
    }

    /// Whether `constraints` entail `c`, decided on the connected component
    /// of the constraint graph that contains the scope of `c`.
    pub fn is_implied(
        &mut self,
        vocab: &Vocabulary,
        constraints: &[Constraint],
        c: &Constraint,
        budget: Duration,
    ) -> Implication {
        let component = connected_component(vocab.len(), constraints, c.scope());
        let local: Vec<Constraint> = constraints
            .iter()
            .filter(|k| k.scope().iter().all(|&v| component.contains(v)))
            .cloned()
            .collect();
        let active = component.to_vec();
        let deadlines = self.deadline(budget);
        let mut weights = vec![1; local.len()];
        let out = Engine::new(
            vocab,
            &active,
            &local,
            vec![c],
            Goal::Maximize,
            VarHeuristic::Dom,
            ValHeuristic::MaxV,
            &mut weights,
            &mut self.rng,
            deadlines,
        )
        .with_priority(c.scope())
        .run();
        match out.best {
            Some(e) => Implication::NotImplied(e),
            None if out.complete() => Implication::Implied,
            None => Implication::Unknown,
        }
    }

    /// Whether `premises` entail each of `conclusions`, with `budget` per check.
    pub fn entails_all(
        &mut self,
        vocab: &Vocabulary,
        premises: &[Constraint],
        conclusions: &[Constraint],
        budget: Duration,
    ) -> Entailment {
        let known: std::collections::HashSet<&Constraint> = premises.iter().collect();
        for c in conclusions {
            if known.contains(c) {
                continue;
            }
            match self.is_implied(vocab, premises, c, budget) {
                Implication::Implied => {}
                Implication::NotImplied(witness) => return Entailment::Fails { constraint: c.clone(), witness },
                Implication::Unknown => return Entailment::Unknown(c.clone()),
            }
        }
        Entailment::Holds
    }

    /// Mutual entailment of two networks: `(a ⊨ b, b ⊨ a)`.
    pub fn equivalence(
        &mut self,
        vocab: &Vocabulary,
        a: &[Constraint],
        b: &[Constraint],
        budget: Duration,
    ) -> (Entailment, Entailment) {
        (self.entails_all(vocab, a, b, budget), self.entails_all(vocab, b, a, budget))
    }

    /// An assignment of exactly `y` that satisfies the members of `learned`
    /// inside `y` and violates at least one but not every member of `delta`.
    /// `None` when none exists or the `cut_max` budget runs out.
    pub fn gen_discriminating(
        &mut self,
        vocab: &Vocabulary,
        learned: &[Constraint],
        delta: &[Constraint],
        y: &VarSet,
    ) -> Option<Assignment> {
        if delta.len() < 2 {
            return None;
        }
        let active = y.to_vec();
        let local: Vec<Constraint> = learned
            .iter()
            .filter(|k| k.scope().iter().all(|&v| y.contains(v)))
            .cloned()
            .collect();
        let deadlines = self.deadline(self.config.cut_max);
        let mut weights = vec![1; local.len()];
        Engine::new(
            vocab,
            &active,
            &local,
            delta.iter().collect(),
            Goal::Discriminate,
            VarHeuristic::Lex,
            ValHeuristic::Random,
            &mut weights,
            &mut self.rng,
            deadlines,
        )
        .run()
        .best
    }
}

/// Variables reachable from `seed` through shared constraint scopes.
pub fn connected_component(n: usize, constraints: &[Constraint], seed: &[Var]) -> VarSet {
    let mut by_var: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in constraints.iter().enumerate() {
        for &v in c.scope() {
            by_var[v].push(i);
        }
    }
    let mut seen = VarSet::empty(n);
    let mut queue: VecDeque<Var> = VecDeque::new();
    for &v in seed {
        if !seen.contains(v) {
            seen.insert(v);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &ci in &by_var[v] {
            for &u in constraints[ci].scope() {
                if !seen.contains(u) {
                    seen.insert(u);
                    queue.push_back(u);
                }
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests;
