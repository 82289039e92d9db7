use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Bias, Constraint, ModelError, Relation, RelationKind, Value, VarSet, Vocabulary};

/// Domains in an instance document: a shared inclusive range or one list per variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Range { min: Value, max: Value },
    Lists(Vec<Vec<Value>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub kind: RelationKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub kind: RelationKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<Value>,
    pub scope: Vec<usize>,
}

/// The on-disk JSON shape of an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub variables: usize,
    pub domains: DomainSpec,
    pub language: Vec<RelationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<ConstraintSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bias: Option<Vec<ConstraintSpec>>,
    /// A learned network to compare against the target (`acqlab verify`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learned: Option<Vec<ConstraintSpec>>,
}

impl RelationSpec {
    pub fn to_relation(&self) -> Result<Relation, ModelError> {
        relation_of(self.kind, &self.params)
    }

    pub fn from_relation(r: &Relation) -> Self {
        RelationSpec { kind: r.kind(), params: r.param().into_iter().collect() }
    }
}

impl ConstraintSpec {
    pub fn to_constraint(&self, vocab: &Vocabulary) -> Result<Constraint, ModelError> {
        Constraint::checked(relation_of(self.kind, &self.params)?, &self.scope, vocab)
    }

    pub fn from_constraint(c: &Constraint) -> Self {
        ConstraintSpec {
            kind: c.kind(),
            params: c.relation().param().into_iter().collect(),
            scope: c.scope().to_vec(),
        }
    }
}

fn relation_of(kind: RelationKind, params: &[Value]) -> Result<Relation, ModelError> {
    match params {
        [] => Relation::new(kind, None),
        [y] => Relation::new(kind, Some(*y)),
        _ => Err(ModelError::UnexpectedParam(kind)),
    }
}

/// A validated acquisition problem: vocabulary, language, bias and (optionally) the target.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub vocab: Vocabulary,
    pub language: Vec<Relation>,
    /// `None` when only the human answering the queries knows the target.
    pub target: Option<Vec<Constraint>>,
    pub bias: Bias,
}

impl Instance {
    /// Validates and assembles an instance; the bias defaults to every
    /// canonical instantiation of the language.
    pub fn new(
        name: impl Into<String>,
        vocab: Vocabulary,
        language: Vec<Relation>,
        target: Option<Vec<Constraint>>,
        bias: Option<Vec<Constraint>>,
    ) -> Result<Self, ModelError> {
        let n = vocab.len();
        let bias = match bias {
            Some(cs) => {
                for c in &cs {
                    if let Some(&v) = c.scope().iter().find(|&&v| v >= n) {
                        return Err(ModelError::VarOutOfRange { var: v, len: n });
                    }
                }
                Bias::from_constraints(n, cs)
            }
            None => Bias::from_language(&vocab, &language),
        };
        if let Some(target) = &target {
            let mut scopes: HashMap<VarSet, &Constraint> = HashMap::new();
            for c in target {
                if let Some(&v) = c.scope().iter().find(|&&v| v >= n) {
                    return Err(ModelError::VarOutOfRange { var: v, len: n });
                }
                if !bias.contains(c) {
                    return Err(ModelError::TargetOutsideBias(c.to_string()));
                }
                if scopes.insert(c.scope_set(n), c).is_some() {
                    return Err(ModelError::NotNormalized(c.to_string()));
                }
            }
        }
        Ok(Instance { name: name.into(), vocab, language, target, bias })
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self, ModelError> {
        let domains = match &file.domains {
            DomainSpec::Range { min, max } => {
                if max < min {
                    return Err(ModelError::EmptyDomain(0));
                }
                vec![(*min..=*max).collect(); file.variables]
            }
            DomainSpec::Lists(lists) => {
                if lists.len() != file.variables {
                    return Err(ModelError::DomainCount { expected: file.variables, got: lists.len() });
                }
                lists.clone()
            }
        };
        let vocab = Vocabulary::new(domains)?;
        let language = file.language.iter().map(RelationSpec::to_relation).collect::<Result<Vec<_>, _>>()?;
        let convert = |specs: &Option<Vec<ConstraintSpec>>| -> Result<Option<Vec<Constraint>>, ModelError> {
            specs
                .as_ref()
                .map(|v| v.iter().map(|s| s.to_constraint(&vocab)).collect())
                .transpose()
        };
        let target = convert(&file.target)?;
        let bias = convert(&file.bias)?;
        Instance::new(file.name.clone().unwrap_or_default(), vocab.clone(), language, target, bias)
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The document form; the bias is written out only when it differs from
    /// the language default.
    pub fn to_file(&self) -> InstanceFile {
        let domains = match self.vocab.shared_range() {
            Some((min, max)) => DomainSpec::Range { min, max },
            None => DomainSpec::Lists(self.vocab.domains().to_vec()),
        };
        let default_bias = Bias::from_language(&self.vocab, &self.language);
        let explicit_bias = default_bias.len() != self.bias.len() || self.bias.iter().any(|c| !default_bias.contains(c));
        InstanceFile {
            name: (!self.name.is_empty()).then(|| self.name.clone()),
            variables: self.vocab.len(),
            domains,
            language: self.language.iter().map(RelationSpec::from_relation).collect(),
            target: self.target.as_ref().map(|t| t.iter().map(ConstraintSpec::from_constraint).collect()),
            bias: explicit_bias.then(|| self.bias.iter().map(ConstraintSpec::from_constraint).collect()),
            learned: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn n_vars(&self) -> usize {
        self.vocab.len()
    }

    /// The target constraints, empty when unknown.
    pub fn target(&self) -> &[Constraint] {
        self.target.as_deref().unwrap_or(&[])
    }

    pub fn max_arity(&self) -> usize {
        self.language.iter().map(Relation::arity).max().unwrap_or(2)
    }
}
