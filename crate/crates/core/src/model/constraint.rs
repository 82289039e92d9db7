use std::fmt;

use smallvec::SmallVec;

use super::{Assignment, ModelError, Relation, RelationKind, Value, Var, VarSet, Vocabulary};

pub type Scope = SmallVec<[Var; 4]>;

/// Outcome of checking a constraint against a (partial) assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eval {
    Satisfied,
    Violated,
    Undecided,
}

/// A relation instantiated on a scope, kept in canonical form so that two
/// constraints compare equal exactly when they are the same mathematical object.
///
/// Canonicalization: symmetric binary relations sort the scope; `Gt`/`Lt` and
/// `Geq`/`Leq` are rewritten to their converse when needed so the scope is
/// ascending; `DiffEq1` keeps its orientation. Quaternary distance relations
/// sort each pair and then order the two pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    relation: Relation,
    scope: Scope,
}

impl Constraint {
    pub fn new(relation: Relation, scope: &[Var]) -> Result<Self, ModelError> {
        if scope.len() != relation.arity() {
            return Err(ModelError::ArityMismatch {
                relation: relation.to_string(),
                expected: relation.arity(),
                got: scope.len(),
            });
        }
        for (i, a) in scope.iter().enumerate() {
            if scope[i + 1..].contains(a) {
                return Err(ModelError::RepeatedScopeVar(*a));
            }
        }
        let mut relation = relation;
        let mut scope: Scope = scope.iter().copied().collect();
        if scope.len() == 2 {
            if scope[0] > scope[1] {
                if let Some(conv) = relation.kind().converse() {
                    relation = relation.with_kind(conv);
                    scope.swap(0, 1);
                }
            }
        } else {
            if scope[0] > scope[1] {
                scope.swap(0, 1);
            }
            if scope[2] > scope[3] {
                scope.swap(2, 3);
            }
            if (scope[2], scope[3]) < (scope[0], scope[1]) {
                scope.swap(0, 2);
                scope.swap(1, 3);
            }
        }
        Ok(Constraint { relation, scope })
    }

    /// Like [`Constraint::new`], also checking scope variables against a vocabulary.
    pub fn checked(relation: Relation, scope: &[Var], vocab: &Vocabulary) -> Result<Self, ModelError> {
        if let Some(&v) = scope.iter().find(|&&v| v >= vocab.len()) {
            return Err(ModelError::VarOutOfRange { var: v, len: vocab.len() });
        }
        Self::new(relation, scope)
    }

    /// Convenience constructor for parameterless binary relations; panics on invalid input.
    pub fn binary(kind: RelationKind, a: Var, b: Var) -> Self {
        Self::new(Relation::plain(kind), &[a, b]).expect("invalid binary constraint")
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn kind(&self) -> RelationKind {
        self.relation.kind()
    }

    pub fn scope(&self) -> &[Var] {
        &self.scope
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn scope_set(&self, capacity: usize) -> VarSet {
        VarSet::from_vars(capacity, self.scope.iter().copied())
    }

    /// Smallest variable index in the scope.
    pub fn first_var(&self) -> Var {
        *self.scope.iter().min().expect("scope is never empty")
    }

    pub fn holds(&self, values: &[Value]) -> bool {
        self.relation.holds(values)
    }

    pub fn evaluate(&self, e: &Assignment) -> Eval {
        let mut vals = [0 as Value; 4];
        for (slot, &v) in vals.iter_mut().zip(self.scope.iter()) {
            match e.get(v) {
                Some(x) => *slot = x,
                None => return Eval::Undecided,
            }
        }
        if self.relation.holds(&vals[..self.scope.len()]) {
            Eval::Satisfied
        } else {
            Eval::Violated
        }
    }

    pub fn is_violated_by(&self, e: &Assignment) -> bool {
        self.evaluate(e) == Eval::Violated
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, v) in self.scope.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "x{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
