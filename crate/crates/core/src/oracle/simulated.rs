use std::collections::BTreeMap;

use super::{Oracle, OracleError};
use crate::model::{Assignment, Constraint, Eval};

/// A simulated user who holds the target network and answers from it directly.
#[derive(Debug, Clone)]
pub struct SimulatedOracle {
    target: Vec<Constraint>,
    asked: usize,
    size_histogram: BTreeMap<usize, usize>,
}

impl SimulatedOracle {
    pub fn new(target: Vec<Constraint>) -> Self {
        SimulatedOracle { target, asked: 0, size_histogram: BTreeMap::new() }
    }

    pub fn target(&self) -> &[Constraint] {
        &self.target
    }

    /// The classification without touching the counters.
    pub fn classify(&self, e: &Assignment) -> bool {
        self.target.iter().all(|c| c.evaluate(e) != Eval::Violated)
    }

    pub fn queries(&self) -> usize {
        self.asked
    }

    /// Query count keyed by the number of assigned variables.
    pub fn size_histogram(&self) -> &BTreeMap<usize, usize> {
        &self.size_histogram
    }
}

impl Oracle for SimulatedOracle {
    fn ask(&mut self, e: &Assignment) -> Result<bool, OracleError> {
        self.asked += 1;
        *self.size_histogram.entry(e.assigned_count()).or_default() += 1;
        Ok(self.classify(e))
    }
}
