//! Hierarchical conditional mixed configuration spaces.
//!
//! A [`ConfigSpace`] is a flat, ordered list of [`VariableSpec`]s. Conditional
//! variables name an earlier discrete parent and the parent candidates that
//! activate them, so evaluating activity in index order always sees resolved
//! parents. Genotypes are fixed-length index vectors; continuous dimensions
//! are encoded by bin index over an adaptively refined partition held in a
//! [`RefinementState`].

mod builtin;
mod dedup;
mod encoding;
mod refine;
mod repair;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builtin::{builtin_space, BUILTIN_SPACE_JSON};
pub use dedup::{canonical_key, Admission, CanonicalKey, DedupRegistry, DEFAULT_N_TRIAL};
pub use encoding::{bin_value, decode, sample_random, DecodedConfig, Genotype, Value};
pub use refine::{Partition, RefinementState, Split, DEFAULT_INITIAL_BINS};
pub use repair::{repair, repair_in_place};

/// A candidate value of a discrete dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Candidate {
    Int(i64),
    Real(f64),
    Symbol(String),
    Tuple(Vec<Candidate>),
}

impl Candidate {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Candidate::Int(v) => Some(v as f64),
            Candidate::Real(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_usize(&self) -> Option<usize> {
        match *self {
            Candidate::Int(v) if v >= 0 => Some(v as usize),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Candidate::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Candidate]> {
        match self {
            Candidate::Tuple(items) => Some(items),
            _ => None,
        }
    }

    /// True when the candidate carries a numeric (or all-numeric tuple) value,
    /// i.e. its position in the candidate list is ordinal.
    pub fn is_numeric(&self) -> bool {
        match self {
            Candidate::Int(_) | Candidate::Real(_) => true,
            Candidate::Symbol(_) => false,
            Candidate::Tuple(items) => items.iter().all(Candidate::is_numeric),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("candidates are always serializable")
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Candidate::Int(v) => write!(f, "{v}"),
            Candidate::Real(v) => write!(f, "{v}"),
            Candidate::Symbol(s) => f.write_str(s),
            Candidate::Tuple(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarKind {
    Discrete,
    Continuous,
    ConditionalDiscrete,
    ConditionalContinuous,
}

impl VarKind {
    pub fn is_continuous(self) -> bool {
        matches!(self, VarKind::Continuous | VarKind::ConditionalContinuous)
    }

    pub fn is_conditional(self) -> bool {
        matches!(self, VarKind::ConditionalDiscrete | VarKind::ConditionalContinuous)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lower: f64,
    pub upper: f64,
    pub scale: Scale,
}

/// Activation rule of a conditional variable: active iff the parent (1-based
/// dimension index) is active and holds one of `values`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParentRule {
    pub dimension: usize,
    pub values: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    /// 1-based dimension index.
    pub index: usize,
    pub name: String,
    pub kind: VarKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<ParentRule>,
}

impl VariableSpec {
    pub fn discrete(index: usize, name: impl Into<String>, candidates: Vec<Candidate>) -> Self {
        Self {
            index,
            name: name.into(),
            kind: VarKind::Discrete,
            candidates,
            range: None,
            parent: None,
        }
    }

    pub fn continuous(index: usize, name: impl Into<String>, lower: f64, upper: f64, scale: Scale) -> Self {
        Self {
            index,
            name: name.into(),
            kind: VarKind::Continuous,
            candidates: Vec::new(),
            range: Some(Range { lower, upper, scale }),
            parent: None,
        }
    }

    /// Makes the variable conditional on `parent` taking one of `values`.
    pub fn with_parent(mut self, parent: usize, values: Vec<Candidate>) -> Self {
        self.kind = if self.kind.is_continuous() {
            VarKind::ConditionalContinuous
        } else {
            VarKind::ConditionalDiscrete
        };
        self.parent = Some(ParentRule {
            dimension: parent,
            values,
        });
        self
    }
}

/// Resolved parent condition: 0-based parent dimension and a mask over the
/// parent's candidate indices.
#[derive(Clone, Debug, PartialEq)]
struct Condition {
    parent: usize,
    activating: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct SpaceDocument {
    variables: Vec<VariableSpec>,
}

/// Validated hierarchical configuration space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDocument", into = "SpaceDocument")]
pub struct ConfigSpace {
    variables: Vec<VariableSpec>,
    conditions: Vec<Option<Condition>>,
    names: Arc<[String]>,
    by_name: HashMap<String, usize>,
}

impl TryFrom<SpaceDocument> for ConfigSpace {
    type Error = Error;

    fn try_from(doc: SpaceDocument) -> Result<Self> {
        ConfigSpace::new(doc.variables)
    }
}

impl From<ConfigSpace> for SpaceDocument {
    fn from(space: ConfigSpace) -> Self {
        SpaceDocument {
            variables: space.variables,
        }
    }
}

fn space_err(var: &VariableSpec, msg: impl fmt::Display) -> Error {
    Error::InvalidSpace(format!("x{} ({}): {msg}", var.index, var.name))
}

impl ConfigSpace {
    pub fn new(variables: Vec<VariableSpec>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidSpace("space has no variables".into()));
        }
        let mut by_name = HashMap::with_capacity(variables.len());
        let mut conditions = Vec::with_capacity(variables.len());
        for (pos, var) in variables.iter().enumerate() {
            if var.index != pos + 1 {
                return Err(space_err(var, format!("expected index {}", pos + 1)));
            }
            if var.name.is_empty() {
                return Err(space_err(var, "empty name"));
            }
            if by_name.insert(var.name.clone(), pos).is_some() {
                return Err(space_err(var, "duplicate name"));
            }
            if var.kind.is_continuous() {
                let range = var
                    .range
                    .ok_or_else(|| space_err(var, "continuous variable without range"))?;
                if !var.candidates.is_empty() {
                    return Err(space_err(var, "continuous variable with candidates"));
                }
                if !(range.lower.is_finite() && range.upper.is_finite() && range.lower < range.upper) {
                    return Err(space_err(var, "range must satisfy lower < upper"));
                }
                if range.scale == Scale::Log && range.lower <= 0.0 {
                    return Err(space_err(var, "log scale requires a positive lower bound"));
                }
            } else {
                if var.range.is_some() {
                    return Err(space_err(var, "discrete variable with range"));
                }
                if var.candidates.is_empty() {
                    return Err(space_err(var, "empty candidate list"));
                }
                for (i, c) in var.candidates.iter().enumerate() {
                    if var.candidates[..i].contains(c) {
                        return Err(space_err(var, format!("duplicate candidate {c}")));
                    }
                }
            }
            let condition = match (&var.parent, var.kind.is_conditional()) {
                (None, false) => None,
                (Some(rule), true) => {
                    if rule.dimension == 0 || rule.dimension >= var.index {
                        return Err(space_err(var, "parent must be an earlier dimension"));
                    }
                    let parent = &variables[rule.dimension - 1];
                    if parent.kind.is_continuous() {
                        return Err(space_err(var, "parent must be discrete"));
                    }
                    if rule.values.is_empty() {
                        return Err(space_err(var, "empty activating set"));
                    }
                    let mut activating = vec![false; parent.candidates.len()];
                    for v in &rule.values {
                        let k = parent
                            .candidates
                            .iter()
                            .position(|c| c == v)
                            .ok_or_else(|| space_err(var, format!("parent has no candidate {v}")))?;
                        activating[k] = true;
                    }
                    Some(Condition {
                        parent: rule.dimension - 1,
                        activating,
                    })
                }
                (None, true) => return Err(space_err(var, "conditional variable without parent")),
                (Some(_), false) => return Err(space_err(var, "unconditional variable with parent")),
            };
            conditions.push(condition);
        }
        let names: Arc<[String]> = variables.iter().map(|v| v.name.clone()).collect();
        Ok(Self {
            variables,
            conditions,
            names,
            by_name,
        })
    }

    pub fn from_json(doc: &str) -> Result<Self> {
        Ok(serde_json::from_str(doc)?)
    }

    /// Pretty JSON document with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("space serializes");
        out.push('\n');
        out
    }

    /// Number of dimensions `J`.
    pub fn dims(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    /// Variable at 0-based position `j`.
    pub fn variable(&self, j: usize) -> &VariableSpec {
        &self.variables[j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn names(&self) -> &Arc<[String]> {
        &self.names
    }

    pub fn is_continuous(&self, j: usize) -> bool {
        self.variables[j].kind.is_continuous()
    }

    /// 0-based parent dimension of `j`, if conditional.
    pub fn parent_of(&self, j: usize) -> Option<usize> {
        self.conditions[j].as_ref().map(|c| c.parent)
    }

    /// Activity bits implied by the parent rules for the given genes.
    pub fn activity(&self, genes: &[usize]) -> Vec<bool> {
        let mut active = vec![true; self.dims()];
        for j in 0..self.dims() {
            if let Some(cond) = &self.conditions[j] {
                let p = cond.parent;
                active[j] = active[p] && cond.activating.get(genes[p]).copied().unwrap_or(false);
            }
        }
        active
    }

    /// True if candidate index `k` of the parent activates `j`.
    pub fn activates(&self, j: usize, k: usize) -> bool {
        self.conditions[j]
            .as_ref()
            .is_none_or(|c| c.activating.get(k).copied().unwrap_or(false))
    }
}
