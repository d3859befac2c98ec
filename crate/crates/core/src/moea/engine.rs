use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::archive::{PlayerArchives, Pool};
use super::early_stop::{EarlyStopState, FrontStats};
use super::offspring::{assemble, parent_offspring, Candidate, OffspringContext};
use super::params::{EarlyStopParams, StageParams, VariationParams};
use super::scoring::{scores_and_weights, ScoreInput};
use super::selection::environmental_select;
use super::sorting::{nd_sort, normalize_crowding, normalize_objectives, rank_and_crowd};
use super::Individual;
use crate::error::{invalid, Result};
use crate::eval::Evaluator;
use crate::metrics::{igd, Point};
use crate::space::{CanonicalKey, DecodedConfig, DedupRegistry, RefinementState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Phmoea,
    Nsga2,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Phmoea => "phmoea",
            Algorithm::Nsga2 => "nsga2",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phmoea" => Ok(Algorithm::Phmoea),
            "nsga2" => Ok(Algorithm::Nsga2),
            other => Err(invalid(format!(
                "unknown algorithm {other:?}; expected phmoea or nsga2"
            ))),
        }
    }
}

/// Everything that determines a run besides the evaluator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub pop_size: usize,
    pub max_gens: usize,
    pub seed: u64,
    pub stage: StageParams,
    pub variation: VariationParams,
    /// `None` disables early stopping.
    pub early_stop: Option<EarlyStopParams>,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, pop_size: usize, max_gens: usize, seed: u64, stage: StageParams) -> Self {
        Self {
            algorithm,
            pop_size,
            max_gens,
            seed,
            stage,
            variation: VariationParams::default(),
            early_stop: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(invalid("population size must be at least 2"));
        }
        if self.max_gens < 1 {
            return Err(invalid("at least one generation is required"));
        }
        self.stage.validate()?;
        self.variation.validate()
    }
}

/// One generation's record. `gen` is 1-based; generation 1 is the initial
/// population.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub gen: usize,
    pub fes: usize,
    pub mean_f1: f64,
    pub mean_f2: f64,
    pub hv: f64,
    pub igd: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParetoMember {
    pub key: CanonicalKey,
    pub f: Point<f64>,
    pub decoded: DecodedConfig,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    /// First front of the final population, sorted by `(f1, f2, key)`.
    pub pareto: Vec<ParetoMember>,
    pub history: Vec<HistoryRow>,
    /// Evaluator calls, failed ones included.
    pub fes: usize,
    /// Evaluations that returned an error.
    pub failed: usize,
    /// Keys of every evaluated candidate, in evaluation order.
    pub evaluated: Vec<CanonicalKey>,
    /// Generation at which early stopping fired.
    pub stopped_at: Option<usize>,
    pub refinement: RefinementState,
}

pub fn run_phmoea(eval: &dyn Evaluator, config: &RunConfig) -> Result<RunResult> {
    let mut c = config.clone();
    c.algorithm = Algorithm::Phmoea;
    run(eval, &c)
}

pub fn run_nsga2(eval: &dyn Evaluator, config: &RunConfig) -> Result<RunResult> {
    let mut c = config.clone();
    c.algorithm = Algorithm::Nsga2;
    run(eval, &c)
}

struct Ledger {
    fes: usize,
    failed: usize,
    evaluated: Vec<CanonicalKey>,
    seen: HashSet<CanonicalKey>,
}

impl Ledger {
    fn evaluate(&mut self, eval: &dyn Evaluator, batch: Vec<Candidate>) -> Vec<Individual> {
        let decoded: Vec<DecodedConfig> = batch.iter().map(|c| c.1.clone()).collect();
        let results = eval.evaluate_batch(&decoded);
        debug_assert_eq!(results.len(), batch.len());
        self.fes += batch.len();
        let mut out = Vec::with_capacity(batch.len());
        for ((genotype, decoded, key), r) in batch.into_iter().zip(results) {
            let fresh = self.seen.insert(key);
            debug_assert!(fresh, "candidate {key} evaluated twice");
            self.evaluated.push(key);
            match r.objectives() {
                Some(f) => out.push(Individual {
                    genotype,
                    decoded,
                    key,
                    f,
                }),
                None => {
                    self.failed += 1;
                    log::warn!(
                        "evaluation of {key} failed: {}",
                        r.message.as_deref().unwrap_or("no message")
                    );
                }
            }
        }
        out
    }
}

fn first_front(pop: &[Individual]) -> Vec<usize> {
    let points: Vec<Point<f64>> = pop.iter().map(|i| i.f).collect();
    nd_sort(&points).1.into_iter().next().unwrap_or_default()
}

/// Runs the configured algorithm to completion or early stop.
///
/// The initial population is generation 1 and every loop iteration adds
/// one generation, so at most `pop_size · max_gens` candidates are
/// evaluated and `history` holds one row per completed generation.
pub fn run(eval: &dyn Evaluator, config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let space = eval.space();
    let n = config.pop_size;
    let t_max = config.max_gens;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut refine = eval.refinement();
    let mut registry = DedupRegistry::new(config.variation.n_trial);
    let mut archives = PlayerArchives::new((0..space.dims()).map(|j| refine.cardinality(j)));
    let m_max = config.stage.m_max(space.dims());
    let mut ledger = Ledger {
        fes: 0,
        failed: 0,
        evaluated: Vec::new(),
        seen: HashSet::new(),
    };

    let initial = OffspringContext {
        space,
        refine: &refine,
        variation: &config.variation,
        m_max,
        registry: &mut registry,
        rng: &mut rng,
    }
    .random(n);
    let mut pop = ledger.evaluate(eval, initial);
    if pop.is_empty() {
        return Err(invalid("every candidate of the initial population failed to evaluate"));
    }

    let p0: Vec<Point<f64>> = pop.iter().map(|i| i.f).collect();
    let params = config.early_stop.clone().unwrap_or_default();
    let mut early = EarlyStopState::new(params, &p0);
    let hv_ref = eval.hv_reference().unwrap_or_else(|| early.reference());
    let reference_front = eval.reference_front();

    let mut history = Vec::with_capacity(t_max);
    let record = |pop: &[Individual], gen: usize, fes: usize| -> Result<HistoryRow> {
        let front: Vec<Point<f64>> = first_front(pop).into_iter().map(|i| pop[i].f).collect();
        let stats = FrontStats::of(&front, &hv_ref);
        Ok(HistoryRow {
            gen,
            fes,
            mean_f1: stats.mean_f1,
            mean_f2: stats.mean_f2,
            hv: stats.hv,
            igd: reference_front.map(|r| igd(&front, r)).transpose()?,
        })
    };
    history.push(record(&pop, 1, ledger.fes)?);
    let mut stopped_at = None;

    for t in 0..t_max.saturating_sub(1) {
        let phi = t as f64 / t_max as f64;
        let front = first_front(&pop);

        if config.early_stop.is_some() {
            let pts: Vec<Point<f64>> = front.iter().map(|&i| pop[i].f).collect();
            early.record(&pts);
            if early.should_stop() {
                stopped_at = Some(t + 1);
                break;
            }
        }

        // refinement, then carry genes and player statistics onto the new bins
        let decoded: Vec<&DecodedConfig> = front.iter().map(|&i| &pop[i].decoded).collect();
        refine.update(&decoded);
        let before = refine.clone();
        let splits = refine.apply();
        if !splits.is_empty() {
            let mut dims: Vec<usize> = splits.iter().map(|s| s.dim).collect();
            dims.dedup();
            for ind in &mut pop {
                for &j in &dims {
                    let old = before.partition(j).expect("split dims are continuous");
                    let g = ind.genotype.gene(j);
                    ind.genotype.set_gene(j, refine.remap_bin(j, old, g));
                    if let Some(c) = ind.genotype.frozen()[j] {
                        ind.genotype.frozen_mut()[j] = Some(refine.remap_bin(j, old, c));
                    }
                }
            }
            archives.apply_splits(&splits);
        }

        let points: Vec<Point<f64>> = pop.iter().map(|i| i.f).collect();
        let (ranks, crowd) = rank_and_crowd(&points);
        let mut ctx = OffspringContext {
            space,
            refine: &refine,
            variation: &config.variation,
            m_max,
            registry: &mut registry,
            rng: &mut rng,
        };
        let offspring = match config.algorithm {
            Algorithm::Nsga2 => parent_offspring(&mut ctx, &pop, &ranks, &crowd, n),
            Algorithm::Phmoea => {
                let norm = normalize_objectives(&points);
                let cn = normalize_crowding(&crowd);
                let inputs: Vec<ScoreInput> = (0..pop.len())
                    .map(|i| ScoreInput {
                        rank: ranks[i],
                        crowding: cn[i],
                        f: norm[i],
                    })
                    .collect();
                let (_, weights) = scores_and_weights(&inputs, phi, &config.stage);
                for (ind, w) in pop.iter().zip(&weights) {
                    archives.credit(ind.genotype.genes(), ind.decoded.active(), *w);
                }
                let s = &config.stage;
                let parts: Vec<_> = (0..space.dims()).map(|j| archives.partition(j, s.q, s.p)).collect();
                let (n_par, n_hot, n_nh) = s.ratios_at(phi).counts(n);
                let mut q = parent_offspring(&mut ctx, &pop, &ranks, &crowd, n_par);
                q.extend(assemble(&mut ctx, &parts, Pool::Hot, s.o, s.e, n_hot));
                q.extend(assemble(&mut ctx, &parts, Pool::NonHot, s.o, s.e, n_nh));
                q
            }
        };

        pop.extend(ledger.evaluate(eval, offspring));
        let points: Vec<Point<f64>> = pop.iter().map(|i| i.f).collect();
        let keep = environmental_select(&points, n);
        let mut slots: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
        pop = keep
            .into_iter()
            .map(|i| slots[i].take().expect("selected once"))
            .collect();
        history.push(record(&pop, t + 2, ledger.fes)?);
    }

    let mut pareto: Vec<ParetoMember> = first_front(&pop)
        .into_iter()
        .map(|i| ParetoMember {
            key: pop[i].key,
            f: pop[i].f,
            decoded: pop[i].decoded.clone(),
        })
        .collect();
    pareto.sort_by(|a, b| {
        a.f[0]
            .total_cmp(&b.f[0])
            .then(a.f[1].total_cmp(&b.f[1]))
            .then(a.key.cmp(&b.key))
    });

    Ok(RunResult {
        pareto,
        history,
        fes: ledger.fes,
        failed: ledger.failed,
        evaluated: ledger.evaluated,
        stopped_at,
        refinement: refine,
    })
}
