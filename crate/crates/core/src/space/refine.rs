//! Adaptive coarse-to-fine partitions of continuous dimensions.

use serde::{Deserialize, Serialize};

use super::{ConfigSpace, DecodedConfig, Scale, Value};

/// Initial bin count for continuous dimensions.
pub const DEFAULT_INITIAL_BINS: usize = 6;

/// Interval partition of one continuous dimension.
///
/// Linear dimensions are partitioned uniformly in value space, log dimensions
/// uniformly in log space; splits bisect in the same domain. Intervals are
/// half-open except the last, which is closed on the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    breakpoints: Vec<f64>,
    counters: Vec<u32>,
    scale: Scale,
}

impl Partition {
    pub fn uniform(lower: f64, upper: f64, bins: usize, scale: Scale) -> Self {
        assert!(bins >= 1 && lower < upper);
        // endpoints are pinned exactly so the span never drifts
        let breakpoints = (0..=bins)
            .map(|k| match k {
                0 => lower,
                k if k == bins => upper,
                k => {
                    let frac = k as f64 / bins as f64;
                    match scale {
                        Scale::Linear => lower + frac * (upper - lower),
                        Scale::Log => (lower.ln() + frac * (upper.ln() - lower.ln())).exp(),
                    }
                }
            })
            .collect();
        Self {
            breakpoints,
            counters: vec![0; bins],
            scale,
        }
    }

    pub fn bins(&self) -> usize {
        self.counters.len()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn counters(&self) -> &[u32] {
        &self.counters
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn lower(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn upper(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Representative value of 0-based bin `k`: the interval midpoint in the
    /// dimension's own scale.
    pub fn representative(&self, k: usize) -> f64 {
        let (lo, hi) = (self.breakpoints[k], self.breakpoints[k + 1]);
        super::bin_value(lo, hi, 1, 1, self.scale).expect("partition intervals are valid")
    }

    /// 0-based interval containing `value`, or `None` outside the range.
    pub fn locate(&self, value: f64) -> Option<usize> {
        if !(value >= self.lower() && value <= self.upper()) {
            return None;
        }
        let k = self.breakpoints.partition_point(|&b| b <= value);
        Some(k.saturating_sub(1).min(self.bins() - 1))
    }

    /// Bin whose representative is nearest to `value` (distance measured in
    /// the partition's scale; ties go to the lower bin).
    pub fn nearest_bin(&self, value: f64) -> usize {
        let t = |v: f64| match self.scale {
            Scale::Linear => v,
            Scale::Log => v.ln(),
        };
        let clamped = value.clamp(self.lower(), self.upper());
        let target = t(clamped);
        // representatives increase with k, so the nearest one is the
        // containing interval's or a neighbour's
        let k = self.locate(clamped).unwrap_or(0);
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for c in k.saturating_sub(1)..=(k + 1).min(self.bins() - 1) {
            let d = (t(self.representative(c)) - target).abs();
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        best
    }

    fn split(&mut self, k: usize) {
        let (lo, hi) = (self.breakpoints[k], self.breakpoints[k + 1]);
        let mid = match self.scale {
            Scale::Linear => 0.5 * (lo + hi),
            Scale::Log => (0.5 * (lo.ln() + hi.ln())).exp(),
        };
        self.breakpoints.insert(k + 1, mid);
        self.counters[k] = 0;
        self.counters.insert(k + 1, 0);
    }
}

/// One interval split performed by [`RefinementState::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Split {
    /// 0-based space dimension.
    pub dim: usize,
    /// 0-based interval index before the split.
    pub interval: usize,
}

/// Per-dimension cardinalities plus the refinable partitions of continuous
/// dimensions and their persistence counters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementState {
    cardinality: Vec<usize>,
    partitions: Vec<Option<Partition>>,
    /// Interval-mass threshold `δ_h`.
    pub threshold: f64,
    /// Consecutive generations `H` required before a split.
    pub persistence: u32,
}

impl RefinementState {
    pub fn new(space: &ConfigSpace, initial_bins: usize, threshold: f64, persistence: u32) -> Self {
        let mut cardinality = Vec::with_capacity(space.dims());
        let mut partitions = Vec::with_capacity(space.dims());
        for var in space.variables() {
            match var.range {
                Some(r) if var.kind.is_continuous() => {
                    partitions.push(Some(Partition::uniform(r.lower, r.upper, initial_bins, r.scale)));
                    cardinality.push(initial_bins);
                }
                _ => {
                    partitions.push(None);
                    cardinality.push(var.candidates.len());
                }
            }
        }
        Self {
            cardinality,
            partitions,
            threshold,
            persistence,
        }
    }

    /// Uses the default thresholds `δ_h = 0.5`, `H = 3` and six initial bins.
    pub fn with_defaults(space: &ConfigSpace) -> Self {
        Self::new(space, DEFAULT_INITIAL_BINS, 0.5, 3)
    }

    /// Current number of candidates (discrete) or bins (continuous) of `j`.
    pub fn cardinality(&self, j: usize) -> usize {
        self.cardinality[j]
    }

    pub fn partition(&self, j: usize) -> Option<&Partition> {
        self.partitions[j].as_ref()
    }

    pub fn continuous_dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.partitions
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.as_ref().map(|_| j))
    }

    /// Updates the persistence counters from the interval masses of the
    /// current non-dominated set. An empty front leaves the state unchanged.
    pub fn update(&mut self, front: &[&DecodedConfig]) {
        if front.is_empty() {
            return;
        }
        let n = front.len() as f64;
        let threshold = self.threshold;
        for (j, part) in self.partitions.iter_mut().enumerate() {
            let Some(part) = part else { continue };
            let mut hits = vec![0usize; part.bins()];
            for cfg in front {
                if let Some(Value::Real { value, .. }) = cfg.value(j) {
                    if let Some(k) = part.locate(*value) {
                        hits[k] += 1;
                    }
                }
            }
            for (c, h) in part.counters.iter_mut().zip(hits) {
                if h as f64 / n > threshold {
                    *c += 1;
                } else {
                    *c = 0;
                }
            }
        }
    }

    /// Interval masses of dimension `j` over `front` (diagnostics and tests).
    pub fn masses(&self, j: usize, front: &[&DecodedConfig]) -> Vec<f64> {
        let part = self.partitions[j].as_ref().expect("continuous dimension");
        let mut hits = vec![0usize; part.bins()];
        for cfg in front {
            if let Some(Value::Real { value, .. }) = cfg.value(j) {
                if let Some(k) = part.locate(*value) {
                    hits[k] += 1;
                }
            }
        }
        let n = front.len().max(1) as f64;
        hits.into_iter().map(|h| h as f64 / n).collect()
    }

    /// Splits every interval whose counter reached `H` at its midpoint.
    /// Returns the splits performed, in ascending (dim, interval) order of
    /// the pre-split partitions.
    pub fn apply(&mut self) -> Vec<Split> {
        let mut splits = Vec::new();
        for (j, part) in self.partitions.iter_mut().enumerate() {
            let Some(part) = part else { continue };
            let triggered: Vec<usize> = part
                .counters
                .iter()
                .enumerate()
                .filter(|(_, &c)| c >= self.persistence)
                .map(|(k, _)| k)
                .collect();
            for (shift, &k) in triggered.iter().enumerate() {
                part.split(k + shift);
                splits.push(Split { dim: j, interval: k });
            }
            self.cardinality[j] = part.bins();
        }
        splits
    }

    /// Maps a bin index of `old` onto the nearest bin of the current
    /// partition of `j` by representative value.
    pub fn remap_bin(&self, j: usize, old: &Partition, bin: usize) -> usize {
        let part = self.partitions[j].as_ref().expect("continuous dimension");
        part.nearest_bin(old.representative(bin.min(old.bins() - 1)))
    }

    #[doc(hidden)]
    pub fn set_counter(&mut self, j: usize, k: usize, value: u32) {
        self.partitions[j].as_mut().expect("continuous dimension").counters[k] = value;
    }
}
