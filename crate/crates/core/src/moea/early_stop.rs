use super::params::EarlyStopParams;
use crate::metrics::{hv, Point};

/// Statistics of the first front of one generation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontStats {
    pub mean_f1: f64,
    pub mean_f2: f64,
    pub hv: f64,
}

impl FrontStats {
    /// Means and hypervolume (w.r.t. `r`) of a non-empty front.
    pub fn of(front: &[Point<f64>], r: &Point<f64>) -> Self {
        let n = front.len().max(1) as f64;
        Self {
            mean_f1: front.iter().map(|p| p[0]).sum::<f64>() / n,
            mean_f2: front.iter().map(|p| p[1]).sum::<f64>() / n,
            hv: hv(front, r),
        }
    }
}

/// `max(0, before - now) / max(|before|, ε0)`.
pub fn relative_decrease(before: f64, now: f64, eps0: f64) -> f64 {
    (before - now).max(0.0) / before.abs().max(eps0)
}

/// `max(0, now - before) / max(|before|, ε0)`.
pub fn relative_increase(before: f64, now: f64, eps0: f64) -> f64 {
    (now - before).max(0.0) / before.abs().max(eps0)
}

/// Windowed stagnation detector. The reference point is fixed at
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct EarlyStopState {
    pub params: EarlyStopParams,
    reference: Point<f64>,
    history: Vec<FrontStats>,
}

impl EarlyStopState {
    /// Reference point `1.1 · max` of each objective over `initial`.
    pub fn new(params: EarlyStopParams, initial: &[Point<f64>]) -> Self {
        let max = |m: usize| initial.iter().map(|p| p[m]).fold(f64::NEG_INFINITY, f64::max);
        Self::with_reference(params, [1.1 * max(0), 1.1 * max(1)])
    }

    pub fn with_reference(params: EarlyStopParams, reference: Point<f64>) -> Self {
        Self {
            params,
            reference,
            history: Vec::new(),
        }
    }

    pub fn reference(&self) -> Point<f64> {
        self.reference
    }

    pub fn history(&self) -> &[FrontStats] {
        &self.history
    }

    /// Appends the statistics of the current first front.
    pub fn record(&mut self, front: &[Point<f64>]) -> FrontStats {
        let s = FrontStats::of(front, &self.reference);
        self.history.push(s);
        s
    }

    pub fn push(&mut self, stats: FrontStats) {
        self.history.push(stats);
    }

    /// Relative improvements `(Δf̄1, Δf̄2, ΔHV)` over the last window, or
    /// `None` while fewer than `W + 1` entries exist.
    pub fn deltas(&self) -> Option<(f64, f64, f64)> {
        let w = self.params.window;
        let n = self.history.len();
        if w == 0 || n <= w {
            return None;
        }
        let (then, now) = (self.history[n - 1 - w], self.history[n - 1]);
        let e = self.params.eps0;
        Some((
            relative_decrease(then.mean_f1, now.mean_f1, e),
            relative_decrease(then.mean_f2, now.mean_f2, e),
            relative_increase(then.hv, now.hv, e),
        ))
    }

    /// True iff all three improvements fell below their thresholds.
    pub fn should_stop(&self) -> bool {
        match self.deltas() {
            Some((d1, d2, dh)) => d1 < self.params.eps1 && d2 < self.params.eps2 && dh < self.params.eps_hv,
            None => false,
        }
    }
}
