mod common;

use std::collections::HashSet;
use std::time::Duration;

use phmoea_core::bench::{HBenchProblem, Variant};
use phmoea_core::eval::{BenchmarkEvaluator, Evaluation, Evaluator, SurrogateEvaluator, SurrogateMode};
use phmoea_core::metrics::dominates;
use phmoea_core::moea::{
    environmental_select, nd_sort, normalize_objectives, report, run, scores_and_weights, Algorithm, EarlyStopParams,
    EarlyStopState, FrontStats, PlayerArchives, RunConfig, RunResult, ScoreInput, StageParams,
};
use phmoea_core::space::{canonical_key, decode, sample_random, ConfigSpace, DecodedConfig, RefinementState};
use phmoea_core::Point64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{bench_run, final_igd};

fn population(max: usize) -> impl Strategy<Value = Vec<Point64>> {
    // a coarse grid makes ties and duplicates common
    prop::collection::vec((0u8..12, 0u8..12), 1..max)
        .prop_map(|v| v.into_iter().map(|(a, b)| [a as f64 * 0.25, b as f64 * 0.5]).collect())
}

/// Population with independent per-objective scale and offset.
fn scaled_population(max: usize) -> impl Strategy<Value = Vec<Point64>> {
    (population(max), 1e-3f64..1e4, 1e-3f64..1e4, -1e3f64..1e3, -1e3f64..1e3)
        .prop_map(|(pts, s1, s2, o1, o2)| pts.into_iter().map(|p| [p[0] * s1 + o1, p[1] * s2 + o2]).collect())
}

fn stage_params() -> impl Strategy<Value = StageParams> {
    prop_oneof![Just(StageParams::real_task()), Just(StageParams::benchmark())]
}

fn short_run(algorithm: Algorithm, pop: usize, gens: usize, seed: u64) -> RunResult {
    let eval = BenchmarkEvaluator::new(HBenchProblem::with_defaults(Variant::Hdtlz2));
    run(
        &eval,
        &RunConfig::new(algorithm, pop, gens, seed, StageParams::benchmark()),
    )
    .unwrap()
}

/// Surrogate that fails on every third configuration by key.
struct Flaky(SurrogateEvaluator);

impl Evaluator for Flaky {
    fn space(&self) -> &ConfigSpace {
        self.0.space()
    }

    fn evaluate(&self, d: &DecodedConfig) -> Evaluation {
        let key = canonical_key(d);
        if key.0.is_multiple_of(3) {
            Evaluation::error(key, "injected", Duration::ZERO)
        } else {
            self.0.evaluate(d)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ranks_survive_per_generation_normalization(pts in scaled_population(60)) {
        prop_assert_eq!(nd_sort(&pts).0, nd_sort(&normalize_objectives(&pts)).0);
    }

    #[test]
    fn weights_lie_on_the_simplex(
        params in stage_params(),
        phi in 0.0f64..1.0,
        inputs in prop::collection::vec((0usize..6, 0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0), 1..50),
    ) {
        let inputs: Vec<ScoreInput> = inputs
            .into_iter()
            .map(|(rank, crowding, a, b)| ScoreInput { rank, crowding, f: [a, b] })
            .collect();
        let (_, w) = scores_and_weights(&inputs, phi, &params);
        prop_assert!(w.iter().all(|&x| x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn offspring_counts_fill_every_slot(params in stage_params(), phi in 0.0f64..1.0, n in 1usize..500) {
        let (a, b, c) = params.ratios_at(phi).counts(n);
        prop_assert_eq!(a + b + c, n);
        for r in params.ratios {
            prop_assert!((r.parent + r.hot + r.non_hot - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partitions_are_disjoint_and_sized(
        heat in prop::collection::vec(0.0f64..5.0, 1..30),
        q in 0.0f64..=1.0,
        p in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let n = heat.len();
        let mut arch = PlayerArchives::new([n]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let k = rand::Rng::gen_range(&mut rng, 0..n);
            arch.credit(&[k], &[true], heat[k]);
        }
        let part = arch.partition(0, q, p);
        let mut all: Vec<usize> = part.hot.iter().chain(&part.normal).chain(&part.cold).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(part.hot.len(), ((q * n as f64) - 1e-9).ceil().max(0.0) as usize);
        let coldest = part.cold.iter().map(|&a| arch.count(0)[a]).max();
        let warmest_normal = part.normal.iter().map(|&a| arch.count(0)[a]).min();
        if let (Some(c), Some(w)) = (coldest, warmest_normal) {
            prop_assert!(c <= w);
        }
    }

    #[test]
    fn selection_is_elitist(pts in population(80), frac in 0.1f64..1.0) {
        let n = ((pts.len() as f64 * frac).ceil() as usize).max(1);
        let chosen = environmental_select(&pts, n);
        prop_assert_eq!(chosen.len(), n.min(pts.len()));
        prop_assert_eq!(chosen.iter().collect::<HashSet<_>>().len(), chosen.len());
        let (rank, _) = nd_sort(&pts);
        let worst_kept = chosen.iter().map(|&i| rank[i]).max().unwrap();
        let kept: HashSet<usize> = chosen.iter().copied().collect();
        for i in 0..pts.len() {
            if !kept.contains(&i) {
                prop_assert!(rank[i] >= worst_kept);
            }
        }
    }

    #[test]
    fn early_stop_needs_a_full_window(window in 1usize..12, hv in 0.1f64..2.0, f in 0.1f64..2.0) {
        let params = EarlyStopParams { window, ..EarlyStopParams::default() };
        let mut state = EarlyStopState::with_reference(params, [10.0, 10.0]);
        for _ in 0..window {
            state.push(FrontStats { mean_f1: f, mean_f2: f, hv });
            prop_assert!(!state.should_stop());
        }
        state.push(FrontStats { mean_f1: f, mean_f2: f, hv });
        prop_assert!(state.should_stop());
    }

    #[test]
    fn refinement_keeps_breakpoints_ordered(seed in any::<u64>(), rounds in 1usize..12) {
        let space = phmoea_core::space::builtin_space();
        let mut refine = RefinementState::new(&space, 6, 0.2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spans: Vec<(usize, f64, f64)> = refine
            .continuous_dims()
            .map(|j| (j, refine.partition(j).unwrap().lower(), refine.partition(j).unwrap().upper()))
            .collect();
        for _ in 0..rounds {
            let front: Vec<DecodedConfig> =
                (0..4).map(|_| decode(&sample_random(&space, &refine, &mut rng), &space, &refine)).collect();
            refine.update(&front.iter().collect::<Vec<_>>());
            refine.apply();
        }
        for (j, lo, hi) in spans {
            let b = refine.partition(j).unwrap().breakpoints();
            prop_assert!(b.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!((b[0], b[b.len() - 1]), (lo, hi));
            prop_assert_eq!(refine.cardinality(j), b.len() - 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn runs_respect_budget_and_never_repeat(
        algorithm in prop_oneof![Just(Algorithm::Phmoea), Just(Algorithm::Nsga2)],
        pop in 4usize..30,
        gens in 1usize..15,
        seed in any::<u64>(),
    ) {
        let r = short_run(algorithm, pop, gens, seed);
        prop_assert!(r.fes <= pop * gens);
        prop_assert_eq!(r.fes, r.evaluated.len());
        prop_assert_eq!(r.evaluated.iter().collect::<HashSet<_>>().len(), r.evaluated.len());
        prop_assert_eq!(r.history.len(), gens);
        prop_assert!(r.history.windows(2).all(|w| w[0].fes <= w[1].fes && w[0].gen + 1 == w[1].gen));
        let f: Vec<Point64> = r.pareto.iter().map(|m| m.f).collect();
        for p in &f {
            prop_assert!(f.iter().all(|q| !dominates(q, p)));
        }
    }
}

#[test]
fn same_seed_same_bytes() {
    for algorithm in [Algorithm::Phmoea, Algorithm::Nsga2] {
        let bytes = |r: &RunResult| {
            let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
            report::write_pareto_front(&r.pareto, &mut a).unwrap();
            report::write_history(&r.history, &mut b).unwrap();
            report::write_pareto_configs(&r.pareto, &mut c).unwrap();
            (a, b, c)
        };
        let x = bytes(&short_run(algorithm, 24, 12, 5));
        assert_eq!(x, bytes(&short_run(algorithm, 24, 12, 5)));
        assert_ne!(x.1, bytes(&short_run(algorithm, 24, 12, 6)).1);
    }
}

#[test]
fn failed_evaluations_are_counted_and_discarded() {
    let eval = Flaky(SurrogateEvaluator::new(8, 1, SurrogateMode::Smooth));
    let r = run(
        &eval,
        &RunConfig::new(Algorithm::Phmoea, 20, 8, 1, StageParams::real_task()),
    )
    .unwrap();
    assert!(r.failed > 0);
    assert!(r.fes <= 160);
    assert!(r.pareto.iter().all(|m| m.key.0 % 3 != 0));
}

#[test]
fn early_stop_cuts_a_stagnant_run_short() {
    let eval = SurrogateEvaluator::new(8, 1, SurrogateMode::ConstantError);
    let mut config = RunConfig::new(Algorithm::Phmoea, 30, 40, 2, StageParams::real_task());
    config.early_stop = Some(EarlyStopParams::default());
    let r = run(&eval, &config).unwrap();
    let stop = r.stopped_at.expect("stagnant run stops");
    assert!(stop > EarlyStopParams::default().window);
    assert!(r.fes < 30 * 40);
    assert_eq!(r.history.last().unwrap().fes, r.fes);
}

#[test]
fn nsga2_baseline_is_comparable() {
    let mean = |algorithm| {
        (0..3)
            .map(|s| final_igd(&bench_run(Variant::Hdtlz2, algorithm, 60, 60, s)))
            .sum::<f64>()
            / 3.0
    };
    let (ph, ns) = (mean(Algorithm::Phmoea), mean(Algorithm::Nsga2));
    assert!(ns <= 3.0 * ph && ph <= 3.0 * ns, "phmoea {ph}, nsga2 {ns}");
}
