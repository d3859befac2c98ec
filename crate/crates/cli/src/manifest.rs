use std::path::PathBuf;
use std::time::Duration;

use phmoea_core::bench::{HBenchProblem, Topology, Variant};
use phmoea_core::eval::{BenchmarkEvaluator, Evaluator, ExternalEvaluator, SurrogateEvaluator, SurrogateMode};
use phmoea_core::moea::{Algorithm, EarlyStopParams, RunConfig, StageParams, VariationParams};
use phmoea_core::space::builtin_space;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// The problem a run optimizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemSpec {
    Benchmark {
        problem: HBenchProblem,
        refine_threshold: f64,
        refine_persistence: u32,
    },
    Surrogate {
        c_in: u64,
        targets: u64,
        mode: SurrogateMode,
    },
    External {
        command: Vec<String>,
        targets: u64,
        workers: usize,
        timeout_secs: u64,
    },
}

impl ProblemSpec {
    pub fn id(&self) -> String {
        match self {
            ProblemSpec::Benchmark { problem, .. } => match problem.variant {
                Variant::Hdtlz2 => "hdtlz2".into(),
                Variant::Hdtlz7 => "hdtlz7".into(),
            },
            ProblemSpec::Surrogate { mode, .. } => match mode {
                SurrogateMode::Smooth => "surrogate".into(),
                SurrogateMode::ConstantError => "surrogate-stagnant".into(),
            },
            ProblemSpec::External { .. } => "external".into(),
        }
    }

    pub fn default_stage(&self) -> StageParams {
        match self {
            ProblemSpec::Benchmark { .. } => StageParams::benchmark(),
            _ => StageParams::real_task(),
        }
    }

    pub fn build(&self) -> Result<Box<dyn Evaluator>, CliError> {
        Ok(match self {
            ProblemSpec::Benchmark {
                problem,
                refine_threshold,
                refine_persistence,
            } => {
                let mut ev = BenchmarkEvaluator::new(problem.clone());
                ev.refine_threshold = *refine_threshold;
                ev.refine_persistence = *refine_persistence;
                Box::new(ev)
            }
            ProblemSpec::Surrogate { c_in, targets, mode } => Box::new(SurrogateEvaluator::new(*c_in, *targets, *mode)),
            ProblemSpec::External {
                command,
                targets,
                workers,
                timeout_secs,
            } => Box::new(
                ExternalEvaluator::new(
                    builtin_space(),
                    command.clone(),
                    *targets,
                    *workers,
                    Duration::from_secs(*timeout_secs),
                )
                .map_err(|e| CliError::Runtime(format!("cannot start worker: {e}")))?,
            ),
        })
    }

    fn validate(&self) -> Result<(), CliError> {
        match self {
            ProblemSpec::Benchmark {
                problem,
                refine_threshold,
                refine_persistence,
            } => {
                if problem.n < 3 {
                    return Err(CliError::Usage("benchmark dimension must be at least 3".into()));
                }
                if !(problem.gamma >= 0.0) {
                    return Err(CliError::Usage("coupling coefficient must be non-negative".into()));
                }
                if !(0.0..1.0).contains(refine_threshold) || *refine_persistence == 0 {
                    return Err(CliError::Usage(
                        "refinement threshold must lie in [0, 1) and persistence be positive".into(),
                    ));
                }
            }
            ProblemSpec::Surrogate { c_in, targets, .. } => {
                if *c_in == 0 || *targets == 0 {
                    return Err(CliError::Usage("input channels and targets must be positive".into()));
                }
            }
            ProblemSpec::External {
                command,
                targets,
                workers,
                timeout_secs,
            } => {
                if command.is_empty() || command[0].is_empty() {
                    return Err(CliError::Usage("external problems need --worker-cmd".into()));
                }
                if *targets == 0 || *workers == 0 || *timeout_secs == 0 {
                    return Err(CliError::Usage("targets, workers and timeout must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Everything needed to reproduce one run bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub problem: ProblemSpec,
    pub algorithm: Algorithm,
    pub pop_size: usize,
    pub max_gens: usize,
    pub seed: u64,
    pub stage: StageParams,
    pub variation: VariationParams,
    pub early_stop: Option<EarlyStopParams>,
    pub output_dir: PathBuf,
}

impl RunManifest {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            algorithm: self.algorithm,
            pop_size: self.pop_size,
            max_gens: self.max_gens,
            seed: self.seed,
            stage: self.stage.clone(),
            variation: self.variation.clone(),
            early_stop: self.early_stop.clone(),
        }
    }

    pub fn run_name(&self) -> String {
        format!("{}-{}-seed{}", self.problem.id(), self.algorithm, self.seed)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.problem.validate()?;
        self.run_config()
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(es) = &self.early_stop {
            if es.window == 0 {
                return Err(CliError::Usage("early-stop window must be positive".into()));
            }
        }
        Ok(())
    }
}

pub fn benchmark(
    variant: Variant,
    n: usize,
    topology: Topology,
    gamma: f64,
    threshold: f64,
    persistence: u32,
) -> Result<ProblemSpec, CliError> {
    let problem = HBenchProblem::new(variant, n, topology, gamma).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(ProblemSpec::Benchmark {
        problem,
        refine_threshold: threshold,
        refine_persistence: persistence,
    })
}
