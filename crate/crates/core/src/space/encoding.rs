use std::sync::Arc;

use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::{Candidate, ConfigSpace, RefinementState, Scale};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Representative value of bin `k` (1-based) when `[lower, upper]` is cut
/// into `bins` equal bins: the midpoint in linear scale, the log-space
/// midpoint in log scale.
pub fn bin_value<T: Scalar>(lower: T, upper: T, bins: usize, k: usize, scale: Scale) -> Result<T> {
    if bins == 0 || k == 0 || k > bins {
        return Err(invalid(format!("bin index {k} outside 1..={bins}")));
    }
    if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
        return Err(invalid(format!("bounds [{lower}, {upper}] are not increasing")));
    }
    let alpha = T::from_usize_lossy(2 * k - 1) / T::from_usize_lossy(2 * bins);
    match scale {
        Scale::Linear => Ok(lower + alpha * (upper - lower)),
        Scale::Log => {
            if lower <= T::zero() {
                return Err(invalid("log scale requires a positive lower bound"));
            }
            Ok(((T::one() - alpha) * lower.ln() + alpha * upper.ln()).exp())
        }
    }
}

/// Fixed-length index encoding of a configuration.
///
/// `genes[j]` is a 0-based candidate index for discrete dimensions and a
/// 0-based bin index for continuous ones. `frozen[j]` holds the cached last
/// valid gene while dimension `j` is inactive; the gene itself then carries
/// the same value as placeholder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Genotype {
    genes: Vec<usize>,
    frozen: Vec<Option<usize>>,
}

impl Genotype {
    pub fn new(genes: Vec<usize>) -> Self {
        let frozen = vec![None; genes.len()];
        Self { genes, frozen }
    }

    pub fn genes(&self) -> &[usize] {
        &self.genes
    }

    pub fn genes_mut(&mut self) -> &mut [usize] {
        &mut self.genes
    }

    pub fn gene(&self, j: usize) -> usize {
        self.genes[j]
    }

    pub fn set_gene(&mut self, j: usize, value: usize) {
        self.genes[j] = value;
    }

    pub fn frozen(&self) -> &[Option<usize>] {
        &self.frozen
    }

    pub(crate) fn frozen_mut(&mut self) -> &mut [Option<usize>] {
        &mut self.frozen
    }

    /// Copies gene and freeze slot `j` from `other`.
    pub fn inherit(&mut self, j: usize, other: &Genotype) {
        self.genes[j] = other.genes[j];
        self.frozen[j] = other.frozen[j];
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

/// Concrete value of an active dimension.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Choice { index: usize, candidate: Candidate },
    Real { bin: usize, value: f64 },
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Choice { candidate, .. } => candidate.to_json(),
            Value::Real { value, .. } => serde_json::json!(value),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Choice { candidate, .. } => candidate.as_f64(),
            Value::Real { value, .. } => Some(*value),
        }
    }

    pub fn candidate(&self) -> Option<&Candidate> {
        match self {
            Value::Choice { candidate, .. } => Some(candidate),
            Value::Real { .. } => None,
        }
    }
}

/// Executable view of a genotype: values for active dimensions only.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodedConfig {
    names: Arc<[String]>,
    values: Vec<Option<Value>>,
    active: Vec<bool>,
}

impl DecodedConfig {
    pub fn values(&self) -> &[Option<Value>] {
        &self.values
    }

    pub fn value(&self, j: usize) -> Option<&Value> {
        self.values[j].as_ref()
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn is_active(&self, j: usize) -> bool {
        self.active[j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        let j = self.names.iter().position(|n| n == name)?;
        self.value(j)
    }

    /// `{name: value}` for active dimensions, in dimension order.
    pub fn to_json_map(&self) -> serde_json::Map<String, serde_json::Value> {
        self.names
            .iter()
            .zip(&self.values)
            .filter_map(|(n, v)| v.as_ref().map(|v| (n.clone(), v.to_json())))
            .collect()
    }

    /// Parses a `{name: value}` document against `space`.
    ///
    /// Discrete values must equal a candidate; continuous values must lie in
    /// the declared range and are assigned to their bin of the current
    /// partition. Variables absent from the map stay unset; variables whose
    /// parent condition fails are dropped.
    pub fn from_json_map(
        space: &ConfigSpace,
        refine: &RefinementState,
        map: &serde_json::Map<String, serde_json::Value>,
    ) -> Result<Self> {
        for key in map.keys() {
            if space.index_of(key).is_none() {
                return Err(invalid(format!("unknown variable {key:?}")));
            }
        }
        let mut values: Vec<Option<Value>> = vec![None; space.dims()];
        let mut choice = vec![usize::MAX; space.dims()];
        for (j, var) in space.variables().iter().enumerate() {
            let Some(raw) = map.get(&var.name) else { continue };
            if let Some(part) = refine.partition(j) {
                let v = raw
                    .as_f64()
                    .ok_or_else(|| invalid(format!("{}: expected a number", var.name)))?;
                let bin = part
                    .locate(v)
                    .ok_or_else(|| invalid(format!("{}: {v} outside declared range", var.name)))?;
                values[j] = Some(Value::Real { bin, value: v });
            } else {
                let cand: Candidate = serde_json::from_value(raw.clone())?;
                let index = var
                    .candidates
                    .iter()
                    .position(|c| *c == cand || (c.as_f64().is_some() && c.as_f64() == cand.as_f64()))
                    .ok_or_else(|| invalid(format!("{}: {cand} is not a candidate", var.name)))?;
                choice[j] = index;
                values[j] = Some(Value::Choice {
                    index,
                    candidate: var.candidates[index].clone(),
                });
            }
        }
        let mut active = vec![true; space.dims()];
        for j in 0..space.dims() {
            if let Some(p) = space.parent_of(j) {
                active[j] = active[p] && choice[p] != usize::MAX && space.activates(j, choice[p]);
            }
            if !active[j] {
                values[j] = None;
            }
        }
        Ok(Self {
            names: space.names().clone(),
            values,
            active,
        })
    }
}

impl Serialize for DecodedConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        for (name, value) in self.names.iter().zip(&self.values) {
            if let Some(v) = value {
                map.serialize_entry(name, &v.to_json())?;
            }
        }
        map.end()
    }
}

/// Decodes `g` against the current partitions. Activity is resolved in
/// dimension order; inactive dimensions carry no value.
pub fn decode(g: &Genotype, space: &ConfigSpace, refine: &RefinementState) -> DecodedConfig {
    let active = space.activity(g.genes());
    let values = (0..space.dims())
        .map(|j| {
            if !active[j] {
                return None;
            }
            let gene = g.gene(j);
            Some(match refine.partition(j) {
                Some(part) => Value::Real {
                    bin: gene,
                    value: part.representative(gene),
                },
                None => Value::Choice {
                    index: gene,
                    candidate: space.variable(j).candidates[gene].clone(),
                },
            })
        })
        .collect();
    DecodedConfig {
        names: space.names().clone(),
        values,
        active,
    }
}

/// Uniform random genotype over the current candidates and bins, repaired.
pub fn sample_random<R: Rng + ?Sized>(space: &ConfigSpace, refine: &RefinementState, rng: &mut R) -> Genotype {
    let genes = (0..space.dims())
        .map(|j| rng.gen_range(0..refine.cardinality(j)))
        .collect();
    let mut g = Genotype::new(genes);
    super::repair_in_place(&mut g, space, refine);
    g
}
