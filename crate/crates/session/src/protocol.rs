//! JSON bodies of the session API.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use acqlab_core::acquisition::{AcquisitionConfig, Algorithm, FindScopeVariant, Metrics};
use acqlab_core::model::{InstanceFile, Value};
use acqlab_core::solver::{QGenMode, SearchConfig, ValHeuristic, VarHeuristic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Generating,
    AwaitingAnswer,
    Converged,
    PrematureConvergence,
    Collapsed,
    Aborted,
}

impl Phase {
    pub fn is_terminal(self) -> bool {
        !matches!(self, Phase::Generating | Phase::AwaitingAnswer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Yes,
    No,
}

impl Classification {
    pub fn positive(self) -> bool {
        self == Classification::Yes
    }

    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Classification::Yes
        } else {
            Classification::No
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerMode {
    /// A person answers every query.
    Human,
    /// The instance target answers; no input needed.
    Simulated,
    /// A person answers, and each query carries the target's answer as a suggestion.
    Hybrid,
    /// Answers come from `script`, in order.
    Scripted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QGen {
    #[default]
    Max,
    MaxB,
}

/// Acquisition settings; every field falls back to the library default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigSpec {
    pub algorithm: Algorithm,
    pub findscope: u8,
    pub qgen: QGen,
    pub var: VarHeuristic,
    pub val: ValHeuristic,
    pub cut_min: f64,
    pub cut_max: f64,
    pub restart_cutoff: f64,
    pub seed: u64,
}

impl Default for ConfigSpec {
    fn default() -> Self {
        let d = AcquisitionConfig::default();
        ConfigSpec {
            algorithm: d.algorithm,
            findscope: 2,
            qgen: QGen::Max,
            var: d.search.var_heuristic,
            val: d.search.val_heuristic,
            cut_min: d.search.cut_min.as_secs_f64(),
            cut_max: d.search.cut_max.as_secs_f64(),
            restart_cutoff: d.restart_cutoff.as_secs_f64(),
            seed: 0,
        }
    }
}

impl ConfigSpec {
    pub fn to_config(&self) -> Result<AcquisitionConfig, String> {
        let secs = |name: &str, s: f64| {
            if s.is_finite() && s > 0.0 {
                Ok(Duration::from_secs_f64(s))
            } else {
                Err(format!("{name} must be a positive number of seconds"))
            }
        };
        let findscope = match self.findscope {
            1 => FindScopeVariant::V1,
            2 => FindScopeVariant::V2,
            f => return Err(format!("findscope must be 1 or 2, got {f}")),
        };
        let search = SearchConfig {
            var_heuristic: self.var,
            val_heuristic: self.val,
            cut_min: secs("cut_min", self.cut_min)?,
            cut_max: secs("cut_max", self.cut_max)?,
            rng_seed: self.seed,
            mode: match self.qgen {
                QGen::Max => QGenMode::MaxComplete,
                QGen::MaxB => QGenMode::MaxBPartial,
            },
        };
        search.validate().map_err(|e| e.to_string())?;
        Ok(AcquisitionConfig {
            algorithm: self.algorithm,
            findscope,
            search,
            restart_cutoff: secs("restart_cutoff", self.restart_cutoff)?,
            ..AcquisitionConfig::default()
        })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkRef {
    pub name: String,
    #[serde(default)]
    pub size: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub extra_relations: usize,
}

/// Body of `POST /sessions`: exactly one of `instance` and `benchmark`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    #[serde(default)]
    pub instance: Option<InstanceFile>,
    #[serde(default)]
    pub benchmark: Option<BenchmarkRef>,
    #[serde(default)]
    pub config: ConfigSpec,
    /// Defaults to `simulated` when the instance has a target, else `human`.
    #[serde(default)]
    pub answers: Option<AnswerMode>,
    #[serde(default)]
    pub script: Option<Vec<Classification>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerRequest {
    pub classification: Classification,
    /// The `index` of the query being answered; a stale index is refused.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendingQuery {
    /// Position of the query in the transcript.
    pub index: usize,
    /// One entry per variable; `null` marks an unassigned variable.
    pub values: Vec<Option<Value>>,
    pub assigned: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suggestion: Option<Classification>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub name: String,
    pub variables: usize,
    pub bias: usize,
    pub has_target: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub id: String,
    pub phase: Phase,
    pub answers: AnswerMode,
    pub instance: InstanceInfo,
    pub pending: Option<PendingQuery>,
    pub queries: usize,
    pub learned: Vec<String>,
    pub bias_remaining: usize,
    /// Present once the run has ended.
    pub metrics: Option<Metrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsweredBy {
    Human,
    Simulated,
    Script,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub index: usize,
    pub values: Vec<Option<Value>>,
    pub answer: Classification,
    pub answered_by: AnsweredBy,
    /// Seconds between posting the query and receiving the answer.
    pub think_secs: f64,
}

/// Everything needed to audit or replay a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub id: String,
    pub phase: Phase,
    pub instance: InstanceFile,
    pub config: ConfigSpec,
    pub answers: AnswerMode,
    pub entries: Vec<TranscriptEntry>,
    pub learned: Vec<String>,
    /// The learner's own query log, available once the run has ended.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log: Option<Vec<acqlab_core::oracle::QueryRecord>>,
}

impl Transcript {
    /// The recorded answers, for replay through a `scripted` session.
    pub fn script(&self) -> Vec<Classification> {
        self.entries.iter().map(|e| e.answer).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}
