use rand::Rng;

use super::archive::{PlayerPartition, Pool};
use super::params::VariationParams;
use super::variation::{crossover, mutate, select_dims, tournament};
use super::Individual;
use crate::space::{
    canonical_key, decode, repair_in_place, Admission, CanonicalKey, ConfigSpace, DecodedConfig, DedupRegistry,
    Genotype, RefinementState,
};

/// Shared state for building one generation's offspring.
pub struct OffspringContext<'a, R: Rng + ?Sized> {
    pub space: &'a ConfigSpace,
    pub refine: &'a RefinementState,
    pub variation: &'a VariationParams,
    pub m_max: usize,
    pub registry: &'a mut DedupRegistry,
    pub rng: &'a mut R,
}

/// A repaired, decoded and admitted candidate awaiting evaluation.
pub type Candidate = (Genotype, DecodedConfig, CanonicalKey);

impl<R: Rng + ?Sized> OffspringContext<'_, R> {
    fn admit(&mut self, mut g: Genotype) -> Option<Candidate> {
        repair_in_place(&mut g, self.space, self.refine);
        let d = decode(&g, self.space, self.refine);
        let key = canonical_key(&d);
        match self.registry.admit(key) {
            Admission::Admitted => Some((g, d, key)),
            Admission::Duplicate => None,
        }
    }

    /// Fills up to `n` slots, each with at most `n_trial` attempts drawn
    /// from `make`. Exhausted slots are skipped.
    fn fill(&mut self, n: usize, mut make: impl FnMut(&mut Self) -> Genotype) -> Vec<Candidate> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            for _ in 0..self.variation.n_trial.max(1) {
                let g = make(self);
                if let Some(c) = self.admit(g) {
                    out.push(c);
                    break;
                }
            }
        }
        out
    }

    /// `n` distinct uniformly random candidates (fewer if retries run out).
    pub fn random(&mut self, n: usize) -> Vec<Candidate> {
        self.fill(n, |ctx| crate::space::sample_random(ctx.space, ctx.refine, ctx.rng))
    }
}

/// Child genotype carrying `genes`. Unchanged genes inherit the source
/// parent's freeze slot; altered genes drop any cached value.
fn child_of(a: &Genotype, b: &Genotype, genes: &[usize]) -> Genotype {
    let mut c = a.clone();
    for (j, &v) in genes.iter().enumerate() {
        if v == a.gene(j) {
            continue;
        }
        if v == b.gene(j) {
            c.inherit(j, b);
        } else {
            c.set_gene(j, v);
            c.frozen_mut()[j] = None;
        }
    }
    c
}

/// Up to `n` offspring by tournament selection, crossover and mutation.
/// Each attempt consumes one child; a crossover yields two.
pub fn parent_offspring<R: Rng + ?Sized>(
    ctx: &mut OffspringContext<'_, R>,
    parents: &[Individual],
    ranks: &[usize],
    crowd: &[f64],
    n: usize,
) -> Vec<Candidate> {
    if parents.is_empty() {
        return ctx.random(n);
    }
    let mut pending: Vec<Genotype> = Vec::new();
    ctx.fill(n, |ctx| {
        if let Some(g) = pending.pop() {
            return g;
        }
        let a = &parents[tournament(ranks, crowd, ctx.rng)].genotype;
        let b = &parents[tournament(ranks, crowd, ctx.rng)].genotype;
        let (mut g1, mut g2) = crossover(a.genes(), b.genes(), ctx.refine, ctx.variation, ctx.rng);
        mutate(&mut g1, ctx.space, ctx.refine, ctx.variation, ctx.m_max, ctx.rng);
        mutate(&mut g2, ctx.space, ctx.refine, ctx.variation, ctx.m_max, ctx.rng);
        pending.push(child_of(b, a, &g2));
        child_of(a, b, &g1)
    })
}

/// Up to `n` offspring assembled by sampling every dimension from `pool`,
/// then resampling each dimension from the opposite pool with probability
/// `e` (at most `m_max` dimensions).
pub fn assemble<R: Rng + ?Sized>(
    ctx: &mut OffspringContext<'_, R>,
    partitions: &[PlayerPartition],
    pool: Pool,
    o: f64,
    e: f64,
    n: usize,
) -> Vec<Candidate> {
    ctx.fill(n, |ctx| {
        let d = ctx.space.dims();
        let mut genes: Vec<usize> = (0..d)
            .map(|j| partitions[j].sample(pool, o, ctx.refine.cardinality(j), ctx.rng))
            .collect();
        for j in select_dims(d, e, ctx.m_max, ctx.rng) {
            genes[j] = partitions[j].sample(pool.opposite(), o, ctx.refine.cardinality(j), ctx.rng);
        }
        Genotype::new(genes)
    })
}
