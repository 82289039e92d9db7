use std::collections::HashMap;

use serde::Deserialize;

use super::{clique, BenchmarkError};
use crate::model::{Constraint, Instance, Relation, RelationKind, Value, Var, Vocabulary};

#[derive(Debug, Clone, Deserialize)]
pub struct ValueRange {
    pub min: Value,
    pub max: Value,
}

/// A logic puzzle: groups of entities that take pairwise distinct values,
/// plus binary clues between named entities.
#[derive(Debug, Clone, Deserialize)]
pub struct Puzzle {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub values: ValueRange,
    pub groups: Vec<Vec<String>>,
    pub clues: Vec<(RelationKind, String, String)>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GtSudokuFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub edges: Vec<(Var, Var)>,
}

impl Puzzle {
    pub fn parse(text: &str) -> Result<Self, BenchmarkError> {
        serde_json::from_str(text).map_err(|e| BenchmarkError::Data(e.to_string()))
    }

    /// Entity labels in variable order.
    pub fn labels(&self) -> Vec<&str> {
        self.groups.iter().flatten().map(String::as_str).collect()
    }

    pub fn instance(&self, language: Vec<Relation>) -> Result<Instance, BenchmarkError> {
        let mut index: HashMap<&str, Var> = HashMap::new();
        for (i, label) in self.labels().into_iter().enumerate() {
            if index.insert(label, i).is_some() {
                return Err(BenchmarkError::Data(format!("duplicate entity `{label}`")));
            }
        }
        let vocab = Vocabulary::uniform(index.len(), self.values.min, self.values.max)?;
        let mut target = Vec::new();
        let mut start = 0;
        for g in &self.groups {
            let vars: Vec<Var> = (start..start + g.len()).collect();
            clique(&vars, &mut target);
            start += g.len();
        }
        let n = index.len();
        for (kind, a, b) in &self.clues {
            let lookup = |l: &str| index.get(l).copied().ok_or_else(|| BenchmarkError::Data(format!("unknown entity `{l}`")));
            let c = Constraint::new(Relation::plain(*kind), &[lookup(a)?, lookup(b)?])?;
            let scope = c.scope_set(n);
            // a clue inside a group refines its ≠
            if let Some(pos) = target.iter().position(|t| t.scope_set(n) == scope) {
                if target[pos].kind() != RelationKind::Neq || pos >= start_of_clues(&self.groups) {
                    return Err(BenchmarkError::Data(format!("two clues on `{a}`, `{b}`")));
                }
                target[pos] = c;
            } else {
                target.push(c);
            }
        }
        Ok(Instance::new(self.name.clone(), vocab, language, Some(target), None)?)
    }
}

fn start_of_clues(groups: &[Vec<String>]) -> usize {
    groups.iter().map(|g| g.len() * (g.len().saturating_sub(1)) / 2).sum()
}
