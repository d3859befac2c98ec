use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use super::{Evaluation, Evaluator};
use crate::bench::{HBenchProblem, REFERENCE_POINTS};
use crate::metrics::Point;
use crate::space::{canonical_key, ConfigSpace, DecodedConfig, RefinementState, DEFAULT_INITIAL_BINS};

/// Analytic H-DTLZ evaluator with a function-evaluation counter.
#[derive(Debug)]
pub struct BenchmarkEvaluator {
    problem: HBenchProblem,
    space: ConfigSpace,
    reference: Vec<Point<f64>>,
    fes: AtomicU64,
    /// Interval-mass threshold used for refinement on this problem.
    pub refine_threshold: f64,
    pub refine_persistence: u32,
}

/// Refinement threshold for benchmark runs. The Pareto set spreads `z1`
/// over its whole range, so a majority threshold would never refine it.
pub const BENCH_REFINE_THRESHOLD: f64 = 0.0;

impl BenchmarkEvaluator {
    pub fn new(problem: HBenchProblem) -> Self {
        let space = problem.space();
        let reference = problem.reference_front(REFERENCE_POINTS);
        Self {
            problem,
            space,
            reference,
            fes: AtomicU64::new(0),
            refine_threshold: BENCH_REFINE_THRESHOLD,
            refine_persistence: 3,
        }
    }

    pub fn problem(&self) -> &HBenchProblem {
        &self.problem
    }

    /// Evaluations performed so far.
    pub fn fes(&self) -> u64 {
        self.fes.load(Ordering::Relaxed)
    }
}

impl Evaluator for BenchmarkEvaluator {
    fn space(&self) -> &ConfigSpace {
        &self.space
    }

    fn evaluate(&self, d: &DecodedConfig) -> Evaluation {
        let start = Instant::now();
        self.fes.fetch_add(1, Ordering::Relaxed);
        let key = canonical_key(d);
        match self.problem.evaluate(d) {
            Ok([f1, f2]) => Evaluation::ok(key, f1, f2, start.elapsed()),
            Err(e) => Evaluation::error(key, e.to_string(), start.elapsed()),
        }
    }

    fn refinement(&self) -> RefinementState {
        RefinementState::new(
            &self.space,
            DEFAULT_INITIAL_BINS,
            self.refine_threshold,
            self.refine_persistence,
        )
    }

    fn reference_front(&self) -> Option<&[Point<f64>]> {
        Some(&self.reference)
    }

    fn hv_reference(&self) -> Option<Point<f64>> {
        Some(self.problem.hv_reference())
    }
}
