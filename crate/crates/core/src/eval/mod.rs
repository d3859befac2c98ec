//! Evaluators turning decoded configurations into objective vectors.

mod benchmark;
mod external;
mod surrogate;

use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use benchmark::{BenchmarkEvaluator, BENCH_REFINE_THRESHOLD};
pub use external::{serve, ExternalEvaluator, Request, Response, DEFAULT_TIMEOUT};
pub use surrogate::{SurrogateEvaluator, SurrogateMode, SURROGATE_TARGET_SEED};

use crate::metrics::Point;
use crate::space::{CanonicalKey, ConfigSpace, DecodedConfig, RefinementState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Outcome of one function evaluation. `Ok` implies finite objectives.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub key: CanonicalKey,
    pub f1: f64,
    pub f2: f64,
    pub status: Status,
    pub wall_time: Duration,
    pub message: Option<String>,
}

impl Evaluation {
    /// Successful evaluation; non-finite objectives are demoted to an error.
    pub fn ok(key: CanonicalKey, f1: f64, f2: f64, wall_time: Duration) -> Self {
        if f1.is_finite() && f2.is_finite() {
            Self {
                key,
                f1,
                f2,
                status: Status::Ok,
                wall_time,
                message: None,
            }
        } else {
            Self::error(key, format!("non-finite objectives ({f1}, {f2})"), wall_time)
        }
    }

    pub fn error(key: CanonicalKey, message: impl Into<String>, wall_time: Duration) -> Self {
        Self {
            key,
            f1: f64::NAN,
            f2: f64::NAN,
            status: Status::Error,
            wall_time,
            message: Some(message.into()),
        }
    }

    pub fn objectives(&self) -> Option<Point<f64>> {
        (self.status == Status::Ok).then_some([self.f1, self.f2])
    }
}

/// A bi-objective problem over a configuration space.
///
/// `evaluate` must be a pure function of the decoded configuration.
/// `evaluate_batch` returns results in input order whatever the dispatch
/// order, so the engine's random stream never depends on timing.
pub trait Evaluator: Send + Sync {
    fn space(&self) -> &ConfigSpace;

    fn evaluate(&self, d: &DecodedConfig) -> Evaluation;

    fn evaluate_batch(&self, batch: &[DecodedConfig]) -> Vec<Evaluation> {
        batch.iter().map(|d| self.evaluate(d)).collect()
    }

    /// Initial refinement state for a run on this problem.
    fn refinement(&self) -> RefinementState {
        RefinementState::with_defaults(self.space())
    }

    /// Known reference front, when one exists.
    fn reference_front(&self) -> Option<&[Point<f64>]> {
        None
    }

    /// Fixed hypervolume reference point, when the problem defines one.
    fn hv_reference(&self) -> Option<Point<f64>> {
        None
    }
}
