use std::fmt;

use super::{ModelError, Value, Var, VarSet, Vocabulary};

/// A partial map from variables to values; the payload of every query.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<Value>>,
}

impl Assignment {
    pub fn empty(n: usize) -> Self {
        Assignment { values: vec![None; n] }
    }

    pub fn complete(values: &[Value]) -> Self {
        Assignment { values: values.iter().copied().map(Some).collect() }
    }

    pub fn from_options(values: Vec<Option<Value>>) -> Self {
        Assignment { values }
    }

    /// Builds an assignment after checking every bound value against the vocabulary.
    pub fn checked(values: Vec<Option<Value>>, vocab: &Vocabulary) -> Result<Self, ModelError> {
        if values.len() != vocab.len() {
            return Err(ModelError::AssignmentLength { expected: vocab.len(), got: values.len() });
        }
        for (var, v) in values.iter().enumerate() {
            if let Some(v) = *v {
                if !vocab.contains(var, v) {
                    return Err(ModelError::ValueOutOfDomain { var, value: v });
                }
            }
        }
        Ok(Assignment { values })
    }

    /// Number of variables in the vocabulary (not the number assigned).
    pub fn width(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn get(&self, var: Var) -> Option<Value> {
        self.values.get(var).copied().flatten()
    }

    pub fn set(&mut self, var: Var, value: Value) {
        self.values[var] = Some(value);
    }

    pub fn unset(&mut self, var: Var) {
        self.values[var] = None;
    }

    pub fn values(&self) -> &[Option<Value>] {
        &self.values
    }

    /// The assigned set `Y`.
    pub fn assigned(&self) -> VarSet {
        VarSet::from_vars(
            self.values.len(),
            self.values.iter().enumerate().filter(|(_, v)| v.is_some()).map(|(i, _)| i),
        )
    }

    pub fn assigned_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }

    /// Restriction to `y`; variables of `y` that are unassigned stay unassigned.
    pub fn project(&self, y: &VarSet) -> Assignment {
        Assignment {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| if y.contains(i) { *v } else { None })
                .collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match v {
                Some(v) => write!(f, "{v}")?,
                None => f.write_str("-")?,
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
