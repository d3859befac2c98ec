use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Evaluation, Evaluator};
use crate::netspec::{build_graph, count_params};
use crate::space::{
    builtin_space, canonical_key, decode, sample_random, Candidate, ConfigSpace, DecodedConfig, RefinementState, Scale,
    Value,
};

/// Seed of the hidden target configuration and categorical offsets. The
/// surrogate is synthetic; this constant makes it reproducible.
pub const SURROGATE_TARGET_SEED: u64 = 0x5EED_0F7A_26E7;

const BASE_ERROR: f64 = 0.05;
const ACTIVITY_MISMATCH: f64 = 0.5;
const CAPACITY_WEIGHT: f64 = 0.05;
const OFFSET_RANGE: (f64, f64) = (0.02, 0.2);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurrogateMode {
    #[default]
    Smooth,
    /// Constant `f1`; models a stagnant search for early-stopping checks.
    ConstantError,
}

/// Deterministic stand-in for a train-validate run over the built-in space.
///
/// `f2` is the exact parameter count. `f1` is a base error plus the mean
/// per-dimension distance to a hidden target configuration, plus a penalty
/// for having fewer parameters than the target.
#[derive(Clone, Debug)]
pub struct SurrogateEvaluator {
    space: ConfigSpace,
    c_in: u64,
    targets: u64,
    mode: SurrogateMode,
    target: DecodedConfig,
    target_position: Vec<Option<f64>>,
    target_log_params: f64,
    /// Per dimension, per candidate offset; empty for non-categorical dims.
    offsets: Vec<Vec<f64>>,
}

/// Normalized position in `[0, 1]` for continuous and ordinal dimensions,
/// `None` for symbolic (categorical) dimensions.
fn position(space: &ConfigSpace, j: usize, v: &Value) -> Option<f64> {
    let var = space.variable(j);
    match v {
        Value::Real { value, .. } => {
            let r = var.range.expect("continuous dims carry a range");
            Some(match r.scale {
                Scale::Linear => (value - r.lower) / (r.upper - r.lower),
                Scale::Log => (value.ln() - r.lower.ln()) / (r.upper.ln() - r.lower.ln()),
            })
        }
        Value::Choice { index, .. } => {
            if is_categorical(&var.candidates) {
                None
            } else if var.candidates.len() < 2 {
                Some(0.0)
            } else {
                Some(*index as f64 / (var.candidates.len() - 1) as f64)
            }
        }
    }
}

fn is_categorical(candidates: &[Candidate]) -> bool {
    fn symbolic(c: &Candidate) -> bool {
        match c {
            Candidate::Symbol(_) => true,
            Candidate::Tuple(items) => items.iter().any(symbolic),
            _ => false,
        }
    }
    candidates.iter().any(symbolic)
}

impl SurrogateEvaluator {
    pub fn new(c_in: u64, targets: u64, mode: SurrogateMode) -> Self {
        let space = builtin_space();
        let refine = RefinementState::with_defaults(&space);
        let mut rng = ChaCha8Rng::seed_from_u64(SURROGATE_TARGET_SEED);
        let target = decode(&sample_random(&space, &refine, &mut rng), &space, &refine);
        let target_position = (0..space.dims())
            .map(|j| target.value(j).and_then(|v| position(&space, j, v)))
            .collect();
        let offsets = space
            .variables()
            .iter()
            .enumerate()
            .map(|(j, var)| {
                if var.kind.is_continuous() || !is_categorical(&var.candidates) {
                    return Vec::new();
                }
                let chosen = match target.value(j) {
                    Some(Value::Choice { index, .. }) => Some(*index),
                    _ => None,
                };
                (0..var.candidates.len())
                    .map(|k| {
                        let o = rng.gen_range(OFFSET_RANGE.0..OFFSET_RANGE.1);
                        if Some(k) == chosen {
                            0.0
                        } else {
                            o
                        }
                    })
                    .collect()
            })
            .collect();
        let target_params = count_params(&build_graph(&target, c_in, targets).expect("target decodes"));
        Self {
            space,
            c_in,
            targets,
            mode,
            target,
            target_position,
            target_log_params: (target_params as f64).ln(),
            offsets,
        }
    }

    /// The hidden optimum of `f1`.
    pub fn target(&self) -> &DecodedConfig {
        &self.target
    }

    fn distance(&self, d: &DecodedConfig) -> f64 {
        let mut total = 0.0;
        for j in 0..self.space.dims() {
            total += match (d.value(j), self.target.value(j)) {
                (None, None) => 0.0,
                (Some(_), None) | (None, Some(_)) => ACTIVITY_MISMATCH,
                (Some(v), Some(_)) => match (position(&self.space, j, v), self.target_position[j]) {
                    (Some(x), Some(t)) => (x - t) * (x - t),
                    _ => match v {
                        Value::Choice { index, .. } => self.offsets[j][*index],
                        Value::Real { .. } => 0.0,
                    },
                },
            };
        }
        total / self.space.dims() as f64
    }

    /// Objectives `(f1, f2)` of a decoded configuration of the built-in space.
    pub fn objectives(&self, d: &DecodedConfig) -> crate::Result<(f64, f64)> {
        let params = count_params(&build_graph(d, self.c_in, self.targets)?) as f64;
        let f1 = match self.mode {
            SurrogateMode::ConstantError => BASE_ERROR,
            SurrogateMode::Smooth => {
                let capacity = (self.target_log_params - params.ln()).max(0.0);
                BASE_ERROR + self.distance(d) + CAPACITY_WEIGHT * capacity
            }
        };
        Ok((f1, params))
    }
}

impl Evaluator for SurrogateEvaluator {
    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn evaluate(&self, d: &DecodedConfig) -> Evaluation {
        let start = Instant::now();
        let key = canonical_key(d);
        match self.objectives(d) {
            Ok((f1, f2)) => Evaluation::ok(key, f1, f2, start.elapsed()),
            Err(e) => Evaluation::error(key, e.to_string(), start.elapsed()),
        }
    }
}
