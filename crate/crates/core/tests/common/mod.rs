//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use phmoea_core::bench::{HBenchProblem, Variant};
use phmoea_core::eval::BenchmarkEvaluator;
use phmoea_core::moea::{run, Algorithm, RunConfig, RunResult, StageParams};
use phmoea_core::resample::{align, align_column, Operator, PoolType, Series};
use phmoea_core::Point64;
use rand::Rng;
use serde_json::{Map, Value};

/// Counts the entries of a tensor by visiting every index.
fn enumerate(shape: &[u64]) -> u64 {
    let mut idx = vec![0u64; shape.len()];
    if shape.contains(&0) {
        return 0;
    }
    let mut n = 0;
    loop {
        n += 1;
        let mut k = shape.len();
        loop {
            if k == 0 {
                return n;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn int(cfg: &Map<String, Value>, name: &str) -> u64 {
    cfg[name].as_u64().unwrap_or_else(|| panic!("{name} missing"))
}

fn kernels(cfg: &Map<String, Value>, name: &str) -> Vec<u64> {
    cfg[name]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect()
}

/// Trainable-parameter count of a configuration given as its JSON map,
/// obtained by listing every weight tensor and visiting each entry.
pub fn brute_force_params(cfg: &Map<String, Value>, c_in: u64, targets: u64) -> u64 {
    let l = int(cfg, "aligned_length");
    let c0 = int(cfg, "projection_channels");
    let widths = [
        int(cfg, "conv1_channels"),
        int(cfg, "conv2_channels"),
        int(cfg, "conv3_channels"),
    ];
    let mut tensors: Vec<Vec<u64>> = vec![vec![c0, c_in], vec![c0]];
    for branch in ["short_kernels", "long_kernels"] {
        let ks = kernels(cfg, branch);
        let mut prev = c0;
        for (c, k) in widths.iter().zip(ks) {
            tensors.push(vec![*c, prev, k]);
            tensors.push(vec![*c]);
            tensors.push(vec![*c]); // norm scale
            tensors.push(vec![*c]); // norm shift
            prev = *c;
        }
    }
    let cf = widths[2];
    let fusion = cfg["fusion"].as_str().unwrap();
    let mode = |name: &str| cfg[name].as_str().unwrap().to_string();
    let out_channels = match fusion {
        "concat" => 2 * cf,
        "add" => cf,
        "weighting" => {
            tensors.push(vec![2 * cf]);
            if mode("weighting_mode") == "concat" {
                2 * cf
            } else {
                cf
            }
        }
        "gating" => {
            tensors.push(vec![cf, 2 * cf]);
            tensors.push(vec![cf]);
            cf
        }
        "attention" => {
            for _ in 0..3 {
                tensors.push(vec![cf, cf]);
            }
            cf
        }
        "cross_mapping" => {
            for _ in 0..2 {
                tensors.push(vec![cf, cf]);
                tensors.push(vec![cf]);
            }
            match mode("cross_mapping_mode").as_str() {
                "gated" => {
                    tensors.push(vec![cf, 2 * cf]);
                    tensors.push(vec![cf]);
                    cf
                }
                "concat" => 2 * cf,
                _ => cf,
            }
        }
        other => panic!("unknown fusion {other}"),
    };
    tensors.push(vec![targets, l * out_channels]);
    tensors.push(vec![targets]);
    tensors.iter().map(|t| enumerate(t)).sum()
}

/// Monte-Carlo hypervolume over the box `[lo, r]`. Returns the estimate
/// and its standard error.
pub fn monte_carlo_hv<R: Rng>(front: &[Point64], r: Point64, lo: Point64, samples: usize, rng: &mut R) -> (f64, f64) {
    let area = (r[0] - lo[0]) * (r[1] - lo[1]);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = [rng.gen_range(lo[0]..r[0]), rng.gen_range(lo[1]..r[1])];
        if front.iter().any(|p| p[0] <= x[0] && p[1] <= x[1]) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (p * area, area * (p * (1.0 - p) / samples as f64).sqrt())
}

/// Random mutually non-dominated front of `n` points inside the unit box.
pub fn random_front<R: Rng>(n: usize, rng: &mut R) -> Vec<Point64> {
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut ys: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(|a, b| b.total_cmp(a));
    xs.into_iter().zip(ys).map(|(x, y)| [x, y]).collect()
}

pub fn pool_for(op: Operator) -> Vec<Option<PoolType>> {
    if op == Operator::Pool {
        PoolType::ALL.iter().copied().map(Some).collect()
    } else {
        vec![None]
    }
}

/// Shape contract, constant preservation and feature independence for one
/// operator on a random `t x f` series aligned to `l_p`.
pub fn check_resample<R: Rng>(
    op: Operator,
    pool: Option<PoolType>,
    t: usize,
    l_p: usize,
    f: usize,
    rng: &mut R,
) -> Result<(), String> {
    let data: Vec<f64> = (0..t * f).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let x = Series::new(t, f, data).unwrap();
    let y = align(&x, l_p, op, pool).map_err(|e| e.to_string())?;
    if y.rows() != l_p || y.cols() != f {
        return Err(format!("{op}: shape {}x{} for {t}->{l_p}", y.rows(), y.cols()));
    }
    for j in 0..f {
        let col = align_column(&x.feature(j), l_p, op, pool);
        if col != y.feature(j) {
            return Err(format!("{op}: feature {j} differs from column-wise alignment"));
        }
    }
    let c: f64 = rng.gen_range(-3.0..3.0);
    let flat = Series::new(t, f, vec![c; t * f]).unwrap();
    let out = align(&flat, l_p, op, pool).unwrap();
    if let Some(v) = out.data().iter().find(|v| (**v - c).abs() > 1e-12) {
        return Err(format!("{op}: constant {c} became {v}"));
    }
    Ok(())
}

/// One benchmark run with the benchmark stage parameters.
pub fn bench_run(variant: Variant, algorithm: Algorithm, pop: usize, gens: usize, seed: u64) -> RunResult {
    let eval = BenchmarkEvaluator::new(HBenchProblem::with_defaults(variant));
    let config = RunConfig::new(algorithm, pop, gens, seed, StageParams::benchmark());
    run(&eval, &config).expect("benchmark run")
}

pub fn final_igd(r: &RunResult) -> f64 {
    r.history.last().unwrap().igd.unwrap()
}

pub fn final_hv(r: &RunResult) -> f64 {
    r.history.last().unwrap().hv
}
