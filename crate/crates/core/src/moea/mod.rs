//! Player-tracking multi-objective search and an NSGA-II baseline.
//!
//! Each generation scores the population by a stage-dependent blend of rank,
//! crowding and normalized objectives, credits the scores to the
//! `(dimension, candidate)` players present in each individual, and builds
//! offspring from three sources: classical variation of parents, assembly
//! from hot players, and assembly from non-hot players.

mod archive;
mod early_stop;
mod engine;
mod offspring;
mod params;
pub mod report;
mod scoring;
mod selection;
mod sorting;
mod variation;

pub use archive::{PlayerArchives, PlayerPartition, Pool};
pub use early_stop::{relative_decrease, relative_increase, EarlyStopState, FrontStats};
pub use engine::{run, run_nsga2, run_phmoea, Algorithm, HistoryRow, ParetoMember, RunConfig, RunResult};
pub use offspring::{assemble, parent_offspring, OffspringContext};
pub use params::{EarlyStopParams, Stage, StageParams, StageRatios, VariationParams};
pub use scoring::{scores_and_weights, stage_score, ScoreInput};
pub use selection::environmental_select;
pub use sorting::{
    crowding, min_max_normalize, nd_sort, normalize_crowding, normalize_objectives, rank_and_crowd, NORM_EPS,
};
pub use variation::{crossover, mutate, mutate_dims, polynomial_mutation, sbx_pair, select_dims, tournament};

use crate::metrics::Point;
use crate::space::{CanonicalKey, DecodedConfig, Genotype};

/// An evaluated member of the population. `decoded` and `key` are those the
/// evaluator saw, even if later refinement moved the genes to new bins.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genotype: Genotype,
    pub decoded: DecodedConfig,
    pub key: CanonicalKey,
    pub f: Point<f64>,
}
