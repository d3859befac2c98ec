//! SBX crossover and polynomial mutation on continuous representatives,
//! uniform crossover and random reset on discrete indices.

use rand::seq::index::sample;
use rand::Rng;

use super::params::VariationParams;
use crate::space::{ConfigSpace, Partition, RefinementState, Scale};

/// Binary tournament on `(rank asc, crowding desc)`; ties keep the first draw.
pub fn tournament<R: Rng + ?Sized>(ranks: &[usize], crowding: &[f64], rng: &mut R) -> usize {
    let a = rng.gen_range(0..ranks.len());
    let b = rng.gen_range(0..ranks.len());
    let better = |x: usize, y: usize| ranks[x] < ranks[y] || (ranks[x] == ranks[y] && crowding[x] > crowding[y]);
    if better(b, a) {
        b
    } else {
        a
    }
}

/// Bounded SBX on one variable pair. Coincident parents are returned as is.
pub fn sbx_pair<R: Rng + ?Sized>(y1: f64, y2: f64, lo: f64, hi: f64, eta: f64, rng: &mut R) -> (f64, f64) {
    if (y1 - y2).abs() <= 1e-14 {
        return (y1, y2);
    }
    let (a, b) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
    let u: f64 = rng.gen();
    let spread = |beta: f64| {
        let alpha = 2.0 - beta.powf(-(eta + 1.0));
        if u <= 1.0 / alpha {
            (u * alpha).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
        }
    };
    let bq1 = spread(1.0 + 2.0 * (a - lo) / (b - a));
    let bq2 = spread(1.0 + 2.0 * (hi - b) / (b - a));
    let c1 = (0.5 * ((a + b) - bq1 * (b - a))).clamp(lo, hi);
    let c2 = (0.5 * ((a + b) + bq2 * (b - a))).clamp(lo, hi);
    if rng.gen_bool(0.5) {
        (c2, c1)
    } else {
        (c1, c2)
    }
}

/// Bounded polynomial mutation of one variable.
pub fn polynomial_mutation<R: Rng + ?Sized>(y: f64, lo: f64, hi: f64, eta: f64, rng: &mut R) -> f64 {
    if hi <= lo {
        return y;
    }
    let d1 = (y - lo) / (hi - lo);
    let d2 = (hi - y) / (hi - lo);
    let u: f64 = rng.gen();
    let pow = 1.0 / (eta + 1.0);
    let dq = if u < 0.5 {
        let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
        v.powf(pow) - 1.0
    } else {
        let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
        1.0 - v.powf(pow)
    };
    (y + dq * (hi - lo)).clamp(lo, hi)
}

/// Maps between bins and the real line the operators act on: the value
/// itself for linear ranges, its logarithm for log ranges.
struct Axis<'a> {
    part: &'a Partition,
}

impl Axis<'_> {
    fn to_real(&self, v: f64) -> f64 {
        match self.part.scale() {
            Scale::Linear => v,
            Scale::Log => v.ln(),
        }
    }

    fn from_real(&self, r: f64) -> f64 {
        match self.part.scale() {
            Scale::Linear => r,
            Scale::Log => r.exp(),
        }
    }

    fn bounds(&self) -> (f64, f64) {
        (self.to_real(self.part.lower()), self.to_real(self.part.upper()))
    }

    fn value(&self, bin: usize) -> f64 {
        self.to_real(self.part.representative(bin))
    }

    fn snap(&self, r: f64) -> usize {
        self.part.nearest_bin(self.from_real(r))
    }
}

/// Crosses two gene vectors. With probability `p_c` every continuous
/// dimension undergoes SBX with probability 0.5 and every discrete gene is
/// swapped with probability 0.5; otherwise the parents are copied.
pub fn crossover<R: Rng + ?Sized>(
    a: &[usize],
    b: &[usize],
    refine: &RefinementState,
    params: &VariationParams,
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    if !rng.gen_bool(params.p_c) {
        return (c1, c2);
    }
    for j in 0..a.len() {
        match refine.partition(j) {
            Some(part) => {
                if !rng.gen_bool(0.5) {
                    continue;
                }
                let axis = Axis { part };
                let (lo, hi) = axis.bounds();
                let (y1, y2) = sbx_pair(axis.value(a[j]), axis.value(b[j]), lo, hi, params.eta_c, rng);
                c1[j] = axis.snap(y1);
                c2[j] = axis.snap(y2);
            }
            None => {
                if rng.gen_bool(0.5) {
                    std::mem::swap(&mut c1[j], &mut c2[j]);
                }
            }
        }
    }
    (c1, c2)
}

/// Dimensions selected for mutation, each with probability `rate`, capped
/// at `m_max` by keeping a uniformly random subset.
pub fn select_dims<R: Rng + ?Sized>(dims: usize, rate: f64, m_max: usize, rng: &mut R) -> Vec<usize> {
    let mut chosen: Vec<usize> = (0..dims).filter(|_| rng.gen_bool(rate.clamp(0.0, 1.0))).collect();
    if chosen.len() > m_max {
        let keep = sample(rng, chosen.len(), m_max);
        let mut kept: Vec<usize> = keep.iter().map(|i| chosen[i]).collect();
        kept.sort_unstable();
        chosen = kept;
    }
    chosen
}

/// Mutates `genes` in place and returns the number of genes changed. With
/// probability `p_m` the offspring is mutated: each dimension is selected
/// with probability `1/D` (at most `m_max`); continuous genes take a
/// polynomial step and snap to the nearest bin, discrete genes reset to a
/// different candidate.
pub fn mutate<R: Rng + ?Sized>(
    genes: &mut [usize],
    space: &ConfigSpace,
    refine: &RefinementState,
    params: &VariationParams,
    m_max: usize,
    rng: &mut R,
) -> usize {
    if !rng.gen_bool(params.p_m) {
        return 0;
    }
    let d = space.dims();
    mutate_dims(genes, &select_dims(d, 1.0 / d as f64, m_max, rng), refine, params, rng)
}

/// Mutates exactly the listed dimensions.
pub fn mutate_dims<R: Rng + ?Sized>(
    genes: &mut [usize],
    dims: &[usize],
    refine: &RefinementState,
    params: &VariationParams,
    rng: &mut R,
) -> usize {
    let mut changed = 0;
    for &j in dims {
        let before = genes[j];
        match refine.partition(j) {
            Some(part) => {
                let axis = Axis { part };
                let (lo, hi) = axis.bounds();
                genes[j] = axis.snap(polynomial_mutation(axis.value(before), lo, hi, params.eta_m, rng));
            }
            None => {
                let n = refine.cardinality(j);
                if n > 1 {
                    let r = rng.gen_range(0..n - 1);
                    genes[j] = if r >= before { r + 1 } else { r };
                }
            }
        }
        changed += usize::from(genes[j] != before);
    }
    changed
}
