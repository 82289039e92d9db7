use serde::{Deserialize, Serialize};

use crate::model::{Assignment, Value};

/// Which part of the learner posted a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuerySite {
    Main,
    FindScope,
    FindScope2,
    FindC,
    FindAllScopes,
    FindAllCons,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub values: Vec<Option<Value>>,
    pub size: usize,
    pub complete: bool,
    pub answer: bool,
    pub site: QuerySite,
    /// `|κ_B(e)|` when the query was posted.
    pub kappa: usize,
    /// The FindScope-2 counter at posting time, when one was active.
    pub rej: Option<usize>,
    /// Seconds the user waited for this query: generation plus dispatch.
    pub wait_secs: f64,
    /// Seconds the oracle took to answer.
    pub answer_secs: f64,
    /// Seconds since the run started, taken when the answer arrived.
    pub at_secs: f64,
}

impl QueryRecord {
    pub fn assignment(&self) -> Assignment {
        Assignment::from_options(self.values.clone())
    }
}

/// Ordered record of every query posted in one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QueryLog {
    records: Vec<QueryRecord>,
}

impl QueryLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: QueryRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[QueryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `#q_c`: queries that assign every variable.
    pub fn complete_count(&self) -> usize {
        self.records.iter().filter(|r| r.complete).count()
    }

    /// `q̄`: mean number of assigned variables per query.
    pub fn mean_size(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.size as f64).sum::<f64>() / self.records.len() as f64
    }

    pub fn answers(&self) -> Vec<bool> {
        self.records.iter().map(|r| r.answer).collect()
    }
}
