use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ModelError, Value};

/// The relation kinds available to a constraint language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    Eq,
    Neq,
    Gt,
    Lt,
    Geq,
    Leq,
    /// `x_i - x_j = 1`
    DiffEq1,
    /// `|x_i - x_j| = 1`
    AbsDiffEq1,
    /// `|x_i - x_j| > y`
    AbsDiffGtY,
    /// `|x_i - x_j| = y`
    AbsDiffEqY,
    /// `|floor(x_i / 3) - floor(x_j / 3)| > y`
    FloorDistGtY,
    /// `|x_i - x_j| = |x_k - x_l|`
    AbsDiffPairEq,
    /// `|x_i - x_j| != |x_k - x_l|`
    AbsDiffPairNeq,
}

impl RelationKind {
    pub const ALL: [RelationKind; 13] = [
        RelationKind::Eq,
        RelationKind::Neq,
        RelationKind::Gt,
        RelationKind::Lt,
        RelationKind::Geq,
        RelationKind::Leq,
        RelationKind::DiffEq1,
        RelationKind::AbsDiffEq1,
        RelationKind::AbsDiffGtY,
        RelationKind::AbsDiffEqY,
        RelationKind::FloorDistGtY,
        RelationKind::AbsDiffPairEq,
        RelationKind::AbsDiffPairNeq,
    ];

    pub fn arity(self) -> usize {
        match self {
            RelationKind::AbsDiffPairEq | RelationKind::AbsDiffPairNeq => 4,
            _ => 2,
        }
    }

    pub fn takes_param(self) -> bool {
        matches!(
            self,
            RelationKind::AbsDiffGtY | RelationKind::AbsDiffEqY | RelationKind::FloorDistGtY
        )
    }

    /// Whether the relation is invariant under the scope permutations that
    /// canonicalization applies (swap for binary, pair-wise swaps for quaternary).
    pub fn is_symmetric(self) -> bool {
        !matches!(
            self,
            RelationKind::Gt
                | RelationKind::Lt
                | RelationKind::Geq
                | RelationKind::Leq
                | RelationKind::DiffEq1
        )
    }

    /// The kind obtained by swapping the two scope variables, when it exists.
    pub fn converse(self) -> Option<RelationKind> {
        match self {
            RelationKind::Gt => Some(RelationKind::Lt),
            RelationKind::Lt => Some(RelationKind::Gt),
            RelationKind::Geq => Some(RelationKind::Leq),
            RelationKind::Leq => Some(RelationKind::Geq),
            k if k.is_symmetric() => Some(k),
            _ => None,
        }
    }
}

/// A relation template: a kind plus its distance parameter where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    kind: RelationKind,
    param: Value,
}

impl Relation {
    pub fn new(kind: RelationKind, param: Option<Value>) -> Result<Self, ModelError> {
        match (kind.takes_param(), param) {
            (true, Some(y)) => Ok(Relation { kind, param: y }),
            (false, None) => Ok(Relation { kind, param: 0 }),
            (true, None) => Err(ModelError::MissingParam(kind)),
            (false, Some(_)) => Err(ModelError::UnexpectedParam(kind)),
        }
    }

    /// Shorthand for parameterless kinds. Panics on a kind that needs `y`.
    pub fn plain(kind: RelationKind) -> Self {
        Self::new(kind, None).expect("relation kind requires a parameter")
    }

    pub fn with_param(kind: RelationKind, y: Value) -> Self {
        Self::new(kind, Some(y)).expect("relation kind takes no parameter")
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    pub fn param(&self) -> Option<Value> {
        self.kind.takes_param().then_some(self.param)
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    pub(crate) fn with_kind(self, kind: RelationKind) -> Self {
        Relation { kind, param: self.param }
    }

    /// Tests the relation on a tuple of `arity()` values.
    #[inline]
    pub fn holds(&self, v: &[Value]) -> bool {
        let y = self.param;
        match self.kind {
            RelationKind::Eq => v[0] == v[1],
            RelationKind::Neq => v[0] != v[1],
            RelationKind::Gt => v[0] > v[1],
            RelationKind::Lt => v[0] < v[1],
            RelationKind::Geq => v[0] >= v[1],
            RelationKind::Leq => v[0] <= v[1],
            RelationKind::DiffEq1 => v[0] - v[1] == 1,
            RelationKind::AbsDiffEq1 => (v[0] - v[1]).abs() == 1,
            RelationKind::AbsDiffGtY => (v[0] - v[1]).abs() > y,
            RelationKind::AbsDiffEqY => (v[0] - v[1]).abs() == y,
            RelationKind::FloorDistGtY => (v[0].div_euclid(3) - v[1].div_euclid(3)).abs() > y,
            RelationKind::AbsDiffPairEq => (v[0] - v[1]).abs() == (v[2] - v[3]).abs(),
            RelationKind::AbsDiffPairNeq => (v[0] - v[1]).abs() != (v[2] - v[3]).abs(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(y) => write!(f, "{:?}({y})", self.kind),
            None => write!(f, "{:?}", self.kind),
        }
    }
}
