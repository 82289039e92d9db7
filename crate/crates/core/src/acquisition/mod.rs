//! QuAcq, MultiAcq and MQuAcq over a shared learning context.
//!
//! The [`Acquirer`] owns the bias, the learned network, the oracle and the
//! query log. The scope-finding and constraint-finding routines are methods
//! on it so the main loops and the tests can drive them directly.

mod findc;
mod mquacq;
mod multiacq;
mod scope;
mod trace;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Assignment, Bias, Constraint, Instance, LearnedNetwork, Var, VarSet, Vocabulary};
use crate::oracle::{Oracle, OracleError, Progress, QueryLog, QueryRecord, QuerySite};
use crate::solver::{ConfigError, QGenMode, QGenResult, SearchConfig, Solver};

pub use findc::Found;
pub use trace::{CallRecord, CallReturn, Routine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    QuAcq,
    MultiAcq,
    MQuAcq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FindScopeVariant {
    V1,
    V2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcquisitionConfig {
    pub algorithm: Algorithm,
    /// Ignored by MultiAcq.
    pub findscope: FindScopeVariant,
    pub search: SearchConfig,
    /// Constraints known before the first query.
    pub background: Vec<Constraint>,
    /// Time FindAllScopes may spend on one example once it has found a scope.
    pub restart_cutoff: Duration,
    /// Budget for each entailment check in FindC; `None` uses `cut_max`.
    pub implied_budget: Option<Duration>,
    /// Record every recursive call of the scope routines.
    pub trace: bool,
}

impl Default for AcquisitionConfig {
    fn default() -> Self {
        AcquisitionConfig {
            algorithm: Algorithm::MQuAcq,
            findscope: FindScopeVariant::V2,
            search: SearchConfig::default(),
            background: Vec::new(),
            restart_cutoff: Duration::from_secs(5),
            implied_budget: None,
            trace: false,
        }
    }
}

impl AcquisitionConfig {
    pub fn qgen_mode(&self) -> QGenMode {
        self.search.mode
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Converged,
    PrematureConvergence,
    Collapse,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub learned_size: usize,
    pub total_queries: usize,
    pub avg_query_size: f64,
    pub complete_queries: usize,
    pub avg_wait: f64,
    pub max_wait: f64,
    pub time_to_last_query: f64,
    pub total_time: f64,
    pub cut_min_hits: usize,
    pub cut_max_hits: usize,
    /// Query generations that needed the per-constraint fallback.
    pub fallback_uses: usize,
    pub bias_remaining: usize,
}

impl Metrics {
    fn from_log(log: &QueryLog) -> Self {
        let records = log.records();
        let waits: Vec<f64> = records.iter().map(|r| r.wait_secs).collect();
        Metrics {
            total_queries: log.len(),
            avg_query_size: log.mean_size(),
            complete_queries: log.complete_count(),
            avg_wait: if waits.is_empty() { 0.0 } else { waits.iter().sum::<f64>() / waits.len() as f64 },
            max_wait: waits.iter().copied().fold(0.0, f64::max),
            time_to_last_query: records.last().map_or(0.0, |r| r.at_secs),
            ..Metrics::default()
        }
    }
}

/// One point of the learning curve, taken after each learned constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub queries: usize,
    pub learned: usize,
    pub elapsed_secs: f64,
}

/// A scope returned by a scope-finding routine, with the example it was found in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeRecord {
    pub example: Assignment,
    pub scope: Vec<Var>,
}

#[derive(Debug, Clone)]
pub struct AcquisitionOutcome {
    pub status: Status,
    pub learned: LearnedNetwork,
    pub bias: Bias,
    pub metrics: Metrics,
    pub log: QueryLog,
    pub curve: Vec<CurvePoint>,
    pub scopes: Vec<ScopeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AcquisitionError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("oracle stopped answering: {0}")]
    Oracle(#[from] OracleError),
    #[error("background constraint {0} is out of range for the vocabulary")]
    Background(String),
}

/// Learns a network for `instance` by asking `oracle`.
pub fn run<O: Oracle>(
    instance: &Instance,
    oracle: O,
    config: AcquisitionConfig,
) -> Result<AcquisitionOutcome, AcquisitionError> {
    Acquirer::new(&instance.vocab, instance.bias.clone(), oracle, config)?.run()
}

type Step<T> = Result<T, OracleError>;

/// The state of one acquisition run.
pub struct Acquirer<'v, O> {
    vocab: &'v Vocabulary,
    bias: Bias,
    learned: LearnedNetwork,
    // mirror of `learned` in the slice form the solver takes
    learned_vec: Vec<Constraint>,
    // C_L plus the bias constraints dropped because C_L entails them: every
    // target constraint is in `bias` or in here
    known: Bias,
    // `known` as a slice, the hard part of generated queries
    hard: Vec<Constraint>,
    oracle: O,
    solver: Solver,
    rng: ChaCha8Rng,
    config: AcquisitionConfig,
    log: QueryLog,
    start: Instant,
    last_answer: Instant,
    collapse: bool,
    rej: Option<usize>,
    sat_witness: Option<Assignment>,
    metrics: Metrics,
    curve: Vec<CurvePoint>,
    scopes: Vec<ScopeRecord>,
    tracer: trace::Tracer,
}

impl<'v, O: Oracle> Acquirer<'v, O> {
    pub fn new(vocab: &'v Vocabulary, bias: Bias, oracle: O, config: AcquisitionConfig) -> Result<Self, AcquisitionError> {
        config.search.validate()?;
        let mut acq = Acquirer {
            vocab,
            bias,
            learned: LearnedNetwork::new(),
            learned_vec: Vec::new(),
            known: Bias::new(vocab.len()),
            hard: Vec::new(),
            oracle,
            solver: Solver::new(config.search.clone()),
            rng: ChaCha8Rng::seed_from_u64(config.search.rng_seed ^ 0x5eed_f1dc),
            tracer: trace::Tracer::new(config.trace),
            config,
            log: QueryLog::new(),
            start: Instant::now(),
            last_answer: Instant::now(),
            collapse: false,
            rej: None,
            sat_witness: None,
            metrics: Metrics::default(),
            curve: Vec::new(),
            scopes: Vec::new(),
        };
        for c in acq.config.background.clone() {
            if c.scope().iter().any(|&v| v >= vocab.len()) {
                return Err(AcquisitionError::Background(c.to_string()));
            }
            acq.add_learned(c);
        }
        Ok(acq)
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    pub fn learned(&self) -> &LearnedNetwork {
        &self.learned
    }

    pub fn log(&self) -> &QueryLog {
        &self.log
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn trace(&self) -> &[CallRecord] {
        self.tracer.records()
    }

    pub fn clear_trace(&mut self) {
        self.tracer.clear();
    }

    pub fn scopes(&self) -> &[ScopeRecord] {
        &self.scopes
    }

    pub fn collapsed(&self) -> bool {
        self.collapse
    }

    /// Runs the configured algorithm to termination.
    pub fn run(mut self) -> Result<AcquisitionOutcome, AcquisitionError> {
        self.start = Instant::now();
        self.last_answer = self.start;
        let status = match self.config.algorithm {
            Algorithm::QuAcq => self.quacq()?,
            Algorithm::MultiAcq => self.multiacq()?,
            Algorithm::MQuAcq => self.mquacq()?,
        };
        Ok(self.finish(status))
    }

    fn finish(self, status: Status) -> AcquisitionOutcome {
        let mut metrics = Metrics::from_log(&self.log);
        metrics.learned_size = self.learned.len();
        metrics.total_time = self.start.elapsed().as_secs_f64();
        metrics.cut_min_hits = self.metrics.cut_min_hits;
        metrics.cut_max_hits = self.metrics.cut_max_hits;
        metrics.fallback_uses = self.metrics.fallback_uses;
        metrics.bias_remaining = self.bias.len();
        AcquisitionOutcome {
            status,
            learned: self.learned,
            bias: self.bias,
            metrics,
            log: self.log,
            curve: self.curve,
            scopes: self.scopes,
        }
    }

    fn quacq(&mut self) -> Step<Status> {
        loop {
            if !self.learned_satisfiable() {
                return Ok(Status::Collapse);
            }
            let e = match self.generate() {
                Ok(e) => e,
                Err(status) => return Ok(status),
            };
            if self.ask(&e, QuerySite::Main)? {
                self.bias.remove_violated(&e);
                continue;
            }
            let scope = self.find_scope_top(&e, &e.assigned())?;
            match self.find_c(&e, &scope)? {
                Some(found) => self.accept(found),
                None => return Ok(Status::Collapse),
            }
        }
    }

    /// `sol(C_L) ≠ ∅`. A search that runs out of time counts as satisfiable.
    fn learned_satisfiable(&mut self) -> bool {
        if let Some(w) = &self.sat_witness {
            if self.learned.accepts(w) {
                return true;
            }
        }
        match self.solver.solve(self.vocab, &self.learned_vec) {
            Ok(Some(w)) => {
                self.sat_witness = Some(w);
                true
            }
            Ok(None) => false,
            Err(_) => true,
        }
    }

    /// The next main-loop example, or the terminal status when there is none.
    fn generate(&mut self) -> Result<Assignment, Status> {
        let QGenResult { example, hit_cut_min, hit_cut_max, proven_none, used_fallback, .. } =
            self.solver.qgen(self.vocab, &self.hard, &self.bias);
        self.metrics.cut_min_hits += hit_cut_min as usize;
        self.metrics.cut_max_hits += hit_cut_max as usize;
        self.metrics.fallback_uses += used_fallback as usize;
        match example {
            Some(e) => {
                if e.is_complete() && self.learned.accepts(&e) {
                    self.sat_witness = Some(e.clone());
                }
                Ok(e)
            }
            None if proven_none => Err(Status::Converged),
            None => Err(Status::PrematureConvergence),
        }
    }

    /// Runs the configured scope finder on the negative example `e_Y`.
    pub fn find_scope_top(&mut self, e: &Assignment, y: &VarSet) -> Step<VarSet> {
        let empty = VarSet::empty(self.vocab.len());
        let scope = match self.config.findscope {
            FindScopeVariant::V1 => self.find_scope(e, &empty, y, false)?,
            FindScopeVariant::V2 => {
                self.rej = Some(self.kappa_all(&e.project(y)));
                let s = self.find_scope2(e, &empty, y, false);
                self.rej = None;
                s?
            }
        };
        self.record_scope(e, &scope);
        Ok(scope)
    }

    fn record_scope(&mut self, e: &Assignment, scope: &VarSet) {
        self.scopes.push(ScopeRecord { example: e.clone(), scope: scope.to_vec() });
    }

    fn add_learned(&mut self, c: Constraint) {
        self.bias.remove(&c);
        if self.learned.add(c.clone()) {
            self.learned_vec.push(c.clone());
            self.add_known(c);
        }
    }

    /// Records a constraint that `C_L` entails; it no longer counts as a candidate.
    fn add_known(&mut self, c: Constraint) {
        if self.known.insert(c.clone()) {
            self.hard.push(c);
        }
    }

    /// Target-closure constraints that reject `e`: the bias plus everything known.
    fn kappa_all(&self, e: &Assignment) -> usize {
        self.bias.kappa_count(e) + self.known.kappa_count(e)
    }

    fn accept(&mut self, found: Found) {
        if let Found::New(c) = found {
            self.learn(c);
        }
    }

    fn learn(&mut self, c: Constraint) {
        self.add_learned(c);
        self.curve.push(CurvePoint {
            queries: self.log.len(),
            learned: self.learned.len(),
            elapsed_secs: self.start.elapsed().as_secs_f64(),
        });
    }

    /// Posts `e` to the oracle and logs the exchange.
    fn ask(&mut self, e: &Assignment, site: QuerySite) -> Step<bool> {
        let kappa = self.bias.kappa_count(e);
        let wait = self.last_answer.elapsed();
        self.oracle.observe(&Progress { bias_size: self.bias.len(), learned: &self.learned, queries: self.log.len() });
        let asked = Instant::now();
        let answer = self.oracle.ask(e)?;
        let now = Instant::now();
        self.last_answer = now;
        self.log.push(QueryRecord {
            values: e.values().to_vec(),
            size: e.assigned_count(),
            complete: e.is_complete(),
            answer,
            site,
            kappa,
            rej: self.rej,
            wait_secs: wait.as_secs_f64(),
            answer_secs: (now - asked).as_secs_f64(),
            at_secs: (now - self.start).as_secs_f64(),
        });
        self.tracer.answer(answer);
        Ok(answer)
    }
}

#[cfg(test)]
mod tests;
