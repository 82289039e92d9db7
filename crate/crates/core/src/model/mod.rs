//! Vocabulary, relations, constraints, bias and assignments.

mod assignment;
mod bias;
mod constraint;
mod instance;
mod network;
mod relation;
mod varset;
mod vocabulary;

pub use assignment::Assignment;
pub use bias::Bias;
pub use constraint::{Constraint, Eval, Scope};
pub use instance::{ConstraintSpec, DomainSpec, Instance, InstanceFile, RelationSpec};
pub use network::LearnedNetwork;
pub use relation::{Relation, RelationKind};
pub use varset::VarSet;
pub use vocabulary::Vocabulary;

pub type Var = usize;
pub type Value = i64;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("vocabulary has no variables")]
    NoVariables,
    #[error("domain of x{0} is empty")]
    EmptyDomain(usize),
    #[error("domain of x{0} contains a duplicate value")]
    DuplicateDomainValue(usize),
    #[error("relation {0:?} requires a parameter")]
    MissingParam(RelationKind),
    #[error("relation {0:?} takes no parameter")]
    UnexpectedParam(RelationKind),
    #[error("relation {relation} has arity {expected}, scope has {got} variables")]
    ArityMismatch { relation: String, expected: usize, got: usize },
    #[error("variable x{0} appears twice in a scope")]
    RepeatedScopeVar(usize),
    #[error("variable x{var} out of range (vocabulary has {len} variables)")]
    VarOutOfRange { var: usize, len: usize },
    #[error("assignment covers {got} variables, vocabulary has {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("value {value} is not in the domain of x{var}")]
    ValueOutOfDomain { var: usize, value: Value },
    #[error("domain count {got} does not match variable count {expected}")]
    DomainCount { expected: usize, got: usize },
    #[error("target constraint {0} is not in the bias")]
    TargetOutsideBias(String),
    #[error("two target constraints share the scope of {0}")]
    NotNormalized(String),
    #[error("malformed instance document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
