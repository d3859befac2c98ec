mod common;

use phmoea_core::netspec::{build_graph, count_params};
use phmoea_core::space::{builtin_space, decode, sample_random, DecodedConfig, Genotype, RefinementState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use common::brute_force_params;

/// Gene positions of the channel-width dimensions.
const WIDTH_GENES: [usize; 4] = [5, 6, 7, 8];
/// Gene positions of batch size and the training dimensions that own no weights.
const TRAINING_GENES: [usize; 10] = [3, 12, 13, 14, 15, 16, 17, 18, 19, 20];

fn from_doc(doc: Value) -> DecodedConfig {
    let space = builtin_space();
    let refine = RefinementState::with_defaults(&space);
    DecodedConfig::from_json_map(&space, &refine, doc.as_object().unwrap()).unwrap()
}

fn worked(fusion: &str, extra: Value) -> DecodedConfig {
    let mut doc = json!({
        "resampling_operator": "linear",
        "aligned_length": 12,
        "batch_size": 64,
        "normalization": "BatchNorm",
        "projection_channels": 16,
        "conv1_channels": 16,
        "conv2_channels": 32,
        "conv3_channels": 64,
        "short_kernels": [3, 5, 7],
        "long_kernels": [9, 11, 13],
        "fusion": fusion,
    });
    for (k, v) in extra.as_object().unwrap() {
        doc[k] = v.clone();
    }
    from_doc(doc)
}

fn params(d: &DecodedConfig, c_in: u64, k: u64) -> u64 {
    count_params(&build_graph(d, c_in, k).unwrap())
}

fn random_config(rng: &mut ChaCha8Rng) -> (Genotype, DecodedConfig) {
    let space = builtin_space();
    let refine = RefinementState::with_defaults(&space);
    let g = sample_random(&space, &refine, rng);
    let d = decode(&g, &space, &refine);
    (g, d)
}

#[test]
fn random_configs_match_brute_force_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..40 {
        let (_, d) = random_config(&mut rng);
        let c_in = rng.gen_range(1..80);
        let k = rng.gen_range(1..8);
        assert_eq!(
            params(&d, c_in, k),
            brute_force_params(&d.to_json_map(), c_in, k),
            "{:?}",
            d.to_json_map()
        );
    }
}

#[test]
fn every_fusion_matches_brute_force() {
    for (fusion, extra) in [
        ("concat", json!({})),
        ("add", json!({})),
        ("weighting", json!({"weighting_mode": "add"})),
        ("weighting", json!({"weighting_mode": "concat"})),
        ("gating", json!({})),
        ("attention", json!({})),
        ("cross_mapping", json!({"cross_mapping_mode": "add"})),
        ("cross_mapping", json!({"cross_mapping_mode": "concat"})),
        ("cross_mapping", json!({"cross_mapping_mode": "gated"})),
    ] {
        let d = worked(fusion, extra);
        assert_eq!(
            params(&d, 50, 5),
            brute_force_params(&d.to_json_map(), 50, 5),
            "{fusion}"
        );
    }
}

#[test]
fn worked_example_concat() {
    let spec = build_graph(&worked("concat", json!({})), 50, 5).unwrap();
    assert_eq!(count_params(&spec), 61397);
    assert_eq!(spec.total_params, 61397);
    let by_layer: u64 = spec.layers.iter().map(|l| l.count).sum();
    assert_eq!(by_layer, 61397);
}

#[test]
fn worked_example_add_fusion() {
    // only the head changes: 5 * (12 * 128) + 5 = 7685 becomes 5 * (12 * 64) + 5 = 3845
    assert_eq!(params(&worked("add", json!({})), 50, 5), 61397 - 7685 + 3845);
    assert_eq!(params(&worked("add", json!({})), 50, 5), 57557);
}

#[test]
fn attention_adds_three_square_maps() {
    let add = params(&worked("add", json!({})), 50, 5);
    let attention = params(&worked("attention", json!({})), 50, 5);
    assert_eq!(attention - add, 3 * 64 * 64);
}

#[test]
fn breakdown_sums_to_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (_, d) = random_config(&mut rng);
        let spec = build_graph(&d, 20, 3).unwrap();
        let by_layer: u64 = spec.layers.iter().map(|l| l.count).sum();
        assert_eq!(by_layer, spec.total_params);
        assert_eq!(count_params(&spec), spec.total_params);
    }
}

#[test]
fn monotone_in_each_width() {
    let space = builtin_space();
    let refine = RefinementState::with_defaults(&space);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let (g, d) = random_config(&mut rng);
        let base = params(&d, 30, 2);
        for j in WIDTH_GENES {
            if g.gene(j) + 1 < space.variable(j).candidates.len() {
                let mut wider = g.clone();
                wider.set_gene(j, g.gene(j) + 1);
                assert!(params(&decode(&wider, &space, &refine), 30, 2) >= base);
            }
        }
    }
}

#[test]
fn independent_of_training_dimensions() {
    let space = builtin_space();
    let refine = RefinementState::with_defaults(&space);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let (g, d) = random_config(&mut rng);
        let other = sample_random(&space, &refine, &mut rng);
        let mut mixed = g.clone();
        for j in TRAINING_GENES {
            mixed.set_gene(j, other.gene(j));
        }
        assert_eq!(params(&decode(&mixed, &space, &refine), 30, 2), params(&d, 30, 2));
    }
}
