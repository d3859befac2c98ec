//! `phmoea`: run searches, compute indicators, resample series and count
//! network parameters.
//!
//! Exit status is 0 on success, 2 for usage errors and 3 for input, I/O or
//! evaluator failures.

mod manifest;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use phmoea_core::bench::{Topology, Variant, DEFAULT_GAMMA, DEFAULT_N};
use phmoea_core::eval::{SurrogateMode, BENCH_REFINE_THRESHOLD};
use phmoea_core::metrics::{hv, igd};
use phmoea_core::moea::{run, Algorithm, EarlyStopParams, VariationParams};
use phmoea_core::netspec::{build_graph, count_params};
use phmoea_core::resample::{align, Operator, PoolType, Series};
use phmoea_core::space::{builtin_space, DecodedConfig, RefinementState};

use manifest::{ProblemSpec, RunManifest};
use output::SeedSummary;

/// Environment variable overriding the default output root.
const OUTPUT_ROOT_ENV: &str = "PHMOEA_OUTPUT_ROOT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Runtime(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) | CliError::Runtime(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "phmoea", version, about = "Bi-objective auto-configuration search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more seeds of a search and write fronts and histories.
    Search(SearchArgs),
    /// Print IGD and hypervolume of a front against a reference front.
    Indicators(IndicatorArgs),
    /// Align a time-major CSV to a new length.
    Resample(ResampleArgs),
    /// Print the network description and parameter count of a configuration.
    CountParams(CountArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// Replay a manifest written by an earlier run; other run flags are ignored.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// hdtlz2, hdtlz7, surrogate, surrogate-stagnant or external.
    #[arg(long, default_value = "hdtlz2")]
    problem: String,
    #[arg(long, default_value = "phmoea")]
    algo: String,
    #[arg(long, default_value_t = 100)]
    pop: usize,
    #[arg(long, default_value_t = 100)]
    gens: usize,
    /// First seed; seeds `seed..seed+seeds` are run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Output root; defaults to $PHMOEA_OUTPUT_ROOT, then `runs`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    early_stop: bool,
    #[arg(long, default_value_t = 8)]
    window: usize,
    #[arg(long)]
    kappa1: Option<f64>,
    #[arg(long)]
    kappa2: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long, default_value_t = 0.8)]
    p_c: f64,
    #[arg(long, default_value_t = 0.2)]
    p_m: f64,
    /// Benchmark: number of continuous variables.
    #[arg(long, default_value_t = DEFAULT_N)]
    bench_n: usize,
    /// Benchmark: coupling coefficient.
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    coupling: f64,
    #[arg(long, default_value = "chain")]
    topology: String,
    /// Benchmark: interval-mass threshold for bin refinement.
    #[arg(long, default_value_t = BENCH_REFINE_THRESHOLD)]
    refine_threshold: f64,
    #[arg(long, default_value_t = 3)]
    refine_persistence: u32,
    /// Surrogate/external: number of forecast targets.
    #[arg(long, default_value_t = 1)]
    targets: u64,
    /// Surrogate: number of input channels.
    #[arg(long, default_value_t = 8)]
    c_in: u64,
    /// External: worker command line, split on whitespace.
    #[arg(long)]
    worker_cmd: Option<String>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 600)]
    timeout: u64,
}

#[derive(Args)]
struct IndicatorArgs {
    #[arg(long)]
    front: PathBuf,
    #[arg(long)]
    reference: PathBuf,
    #[arg(long, default_value_t = 1.1)]
    r1: f64,
    #[arg(long, default_value_t = 1.1)]
    r2: f64,
}

#[derive(Args)]
struct ResampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    operator: String,
    /// Pooling type; required with `--operator pool`.
    #[arg(long)]
    pool: Option<String>,
    /// Target length.
    #[arg(long)]
    length: usize,
}

#[derive(Args)]
struct CountArgs {
    /// JSON object mapping variable names to values.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 8)]
    c_in: u64,
    #[arg(long, default_value_t = 1)]
    targets: u64,
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn output_root(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"))
}

fn problem_spec(a: &SearchArgs) -> Result<ProblemSpec, CliError> {
    let topology: Topology = a.topology.parse().map_err(usage)?;
    let surrogate = |mode| ProblemSpec::Surrogate {
        c_in: a.c_in,
        targets: a.targets,
        mode,
    };
    match a.problem.as_str() {
        "hdtlz2" | "hdtlz7" => {
            let variant: Variant = a.problem.parse().map_err(usage)?;
            manifest::benchmark(
                variant,
                a.bench_n,
                topology,
                a.coupling,
                a.refine_threshold,
                a.refine_persistence,
            )
        }
        "surrogate" => Ok(surrogate(SurrogateMode::Smooth)),
        "surrogate-stagnant" => Ok(surrogate(SurrogateMode::ConstantError)),
        "external" => Ok(ProblemSpec::External {
            command: a
                .worker_cmd
                .as_deref()
                .unwrap_or("")
                .split_whitespace()
                .map(String::from)
                .collect(),
            targets: a.targets,
            workers: a.workers,
            timeout_secs: a.timeout,
        }),
        other => Err(CliError::Usage(format!(
            "unknown problem {other:?}; expected hdtlz2, hdtlz7, surrogate, surrogate-stagnant or external"
        ))),
    }
}

fn manifests(a: &SearchArgs, root: &Path) -> Result<Vec<RunManifest>, CliError> {
    if let Some(path) = &a.manifest {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut m: RunManifest = serde_json::from_str(&text).map_err(usage)?;
        if a.out.is_some() || std::env::var_os(OUTPUT_ROOT_ENV).is_some() {
            m.output_dir = root.join(m.run_name());
        }
        return Ok(vec![m]);
    }
    let problem = problem_spec(a)?;
    let algorithm: Algorithm = a.algo.parse().map_err(usage)?;
    let mut stage = problem.default_stage();
    stage.kappa1 = a.kappa1.unwrap_or(stage.kappa1);
    stage.kappa2 = a.kappa2.unwrap_or(stage.kappa2);
    stage.w = a.w.unwrap_or(stage.w);
    let variation = VariationParams {
        p_c: a.p_c,
        p_m: a.p_m,
        ..VariationParams::default()
    };
    let early_stop = a.early_stop.then(|| EarlyStopParams {
        window: a.window,
        ..EarlyStopParams::default()
    });
    if a.seeds == 0 {
        return Err(CliError::Usage("--seeds must be positive".into()));
    }
    Ok((a.seed..a.seed + a.seeds)
        .map(|seed| {
            let mut m = RunManifest {
                problem: problem.clone(),
                algorithm,
                pop_size: a.pop,
                max_gens: a.gens,
                seed,
                stage: stage.clone(),
                variation: variation.clone(),
                early_stop: early_stop.clone(),
                output_dir: PathBuf::new(),
            };
            m.output_dir = root.join(m.run_name());
            m
        })
        .collect())
}

fn cmd_search(a: SearchArgs) -> Result<(), CliError> {
    let root = output_root(a.out.clone());
    let runs = manifests(&a, &root)?;
    for m in &runs {
        m.validate()?;
    }
    let mut summary = Vec::with_capacity(runs.len());
    for m in &runs {
        let eval = m.problem.build()?;
        let result = run(eval.as_ref(), &m.run_config()).map_err(|e| CliError::Runtime(e.to_string()))?;
        output::write_run(&m.output_dir, m, &result)?;
        let last = result.history.last().expect("history holds the initial generation");
        println!(
            "{}: {} evaluations ({} failed), front {}, hv {:.7}{}{}",
            m.run_name(),
            result.fes,
            result.failed,
            result.pareto.len(),
            last.hv,
            last.igd.map(|v| format!(", igd {v:.7}")).unwrap_or_default(),
            result
                .stopped_at
                .map(|g| format!(", stopped at generation {g}"))
                .unwrap_or_default(),
        );
        summary.push(SeedSummary {
            seed: m.seed,
            fes: result.fes,
            front_size: result.pareto.len(),
            igd: last.igd,
            hv: last.hv,
        });
    }
    if a.manifest.is_none() {
        std::fs::create_dir_all(&root)?;
        output::write_summary(&root.join("summary.csv"), &summary)?;
    }
    Ok(())
}

fn cmd_indicators(a: IndicatorArgs) -> Result<(), CliError> {
    let front = output::read_points(&a.front)?;
    let reference = output::read_points(&a.reference)?;
    let d = igd(&front, &reference).map_err(|e| CliError::Input(e.to_string()))?;
    println!("IGD {d:.7}");
    println!("HV {:.7}", hv(&front, &[a.r1, a.r2]));
    Ok(())
}

fn cmd_resample(a: ResampleArgs) -> Result<(), CliError> {
    let op: Operator = a.operator.parse().map_err(usage)?;
    let pool = match (op, &a.pool) {
        (Operator::Pool, None) => return Err(CliError::Usage("--operator pool requires --pool".into())),
        (Operator::Pool, Some(p)) => Some(p.parse::<PoolType>().map_err(usage)?),
        (_, _) => None,
    };
    let input = |msg: String| CliError::Input(format!("{}: {msg}", a.input.display()));
    let mut r = csv::Reader::from_path(&a.input).map_err(|e| input(e.to_string()))?;
    let headers = r.headers().map_err(|e| input(e.to_string()))?.clone();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| input(e.to_string()))?;
        let row: Vec<f64> = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| input(format!("row {}: {s:?} is not a number", i + 1)))
            })
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    let series = Series::from_rows(&rows).map_err(|e| input(e.to_string()))?;
    let out = align(&series, a.length, op, pool).map_err(usage)?;
    let mut w = csv::Writer::from_path(&a.output).map_err(|e| CliError::Runtime(e.to_string()))?;
    w.write_record(&headers).map_err(|e| CliError::Runtime(e.to_string()))?;
    for t in 0..out.rows() {
        w.write_record(out.row(t).iter().map(|v| v.to_string()))
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_count_params(a: CountArgs) -> Result<(), CliError> {
    let text =
        std::fs::read_to_string(&a.config).map_err(|e| CliError::Input(format!("{}: {e}", a.config.display())))?;
    let map: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let space = builtin_space();
    let refine = RefinementState::with_defaults(&space);
    let d = DecodedConfig::from_json_map(&space, &refine, &map).map_err(|e| CliError::Input(e.to_string()))?;
    let spec = build_graph(&d, a.c_in, a.targets).map_err(|e| CliError::Input(e.to_string()))?;
    println!("{}", spec.to_json_pretty());
    println!("total parameters: {}", count_params(&spec));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Search(a) => cmd_search(a),
        Command::Indicators(a) => cmd_indicators(a),
        Command::Resample(a) => cmd_resample(a),
        Command::CountParams(a) => cmd_count_params(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phmoea: {e}");
            ExitCode::from(e.code())
        }
    }
}
