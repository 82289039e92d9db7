//! The answering side of the protocol.

mod log;
mod simulated;

pub use log::{QueryLog, QueryRecord, QuerySite};
pub use simulated::SimulatedOracle;

use std::collections::VecDeque;

use crate::model::{Assignment, LearnedNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("no answer arrived before the deadline")]
    Timeout,
    #[error("the oracle aborted the session")]
    Aborted,
}

/// What the learner knows at the moment a query is posted.
#[derive(Debug, Clone, Copy)]
pub struct Progress<'a> {
    pub bias_size: usize,
    pub learned: &'a LearnedNetwork,
    pub queries: usize,
}

/// Classifies (partial) examples. `true` means the example is positive.
///
/// Implementations must answer consistently: asking the same assignment
/// twice yields the same answer.
pub trait Oracle {
    fn ask(&mut self, e: &Assignment) -> Result<bool, OracleError>;

    /// Called before every query so interactive front ends can show progress.
    fn observe(&mut self, _progress: &Progress<'_>) {}
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn ask(&mut self, e: &Assignment) -> Result<bool, OracleError> {
        (**self).ask(e)
    }

    fn observe(&mut self, progress: &Progress<'_>) {
        (**self).observe(progress)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn ask(&mut self, e: &Assignment) -> Result<bool, OracleError> {
        (**self).ask(e)
    }

    fn observe(&mut self, progress: &Progress<'_>) {
        (**self).observe(progress)
    }
}

/// Replays a fixed list of answers; reports `Aborted` once they run out.
#[derive(Debug, Clone, Default)]
pub struct ScriptedOracle {
    answers: VecDeque<bool>,
}

impl ScriptedOracle {
    pub fn new(answers: impl IntoIterator<Item = bool>) -> Self {
        ScriptedOracle { answers: answers.into_iter().collect() }
    }

    pub fn remaining(&self) -> usize {
        self.answers.len()
    }
}

impl Oracle for ScriptedOracle {
    fn ask(&mut self, _e: &Assignment) -> Result<bool, OracleError> {
        self.answers.pop_front().ok_or(OracleError::Aborted)
    }
}
