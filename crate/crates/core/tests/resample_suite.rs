mod common;

use phmoea_core::resample::{align, align_column, Operator, PoolType, Series};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{check_resample, pool_for};

/// Operators whose outputs stay inside the per-feature input range.
const BOUNDED: [(Operator, Option<PoolType>); 5] = [
    (Operator::Linear, None),
    (Operator::DecimateRepeat, None),
    (Operator::Pool, Some(PoolType::Avg)),
    (Operator::Pool, Some(PoolType::Median)),
    (Operator::Pool, Some(PoolType::Weighted)),
];

fn column(v: &[f64]) -> Series<f64> {
    Series::column(v).unwrap()
}

fn variants() -> Vec<(Operator, Option<PoolType>)> {
    Operator::ALL
        .iter()
        .flat_map(|&op| pool_for(op).into_iter().map(move |p| (op, p)))
        .collect()
}

fn variant() -> impl Strategy<Value = (Operator, Option<PoolType>)> {
    prop::sample::select(variants())
}

#[test]
fn linear_example() {
    assert_eq!(
        align(&column(&[0.0, 1.0, 2.0]), 5, Operator::Linear, None)
            .unwrap()
            .data(),
        [0.0, 0.5, 1.0, 1.5, 2.0]
    );
}

#[test]
fn decimate_repeat_up_example() {
    let (a, b) = (3.25, -7.5);
    assert_eq!(
        align(&column(&[a, b]), 5, Operator::DecimateRepeat, None)
            .unwrap()
            .data(),
        [a, a, a, b, b]
    );
}

#[test]
fn pool_avg_example() {
    let x = column(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    assert_eq!(
        align(&x, 3, Operator::Pool, Some(PoolType::Avg)).unwrap().data(),
        [0.5, 2.5, 4.5]
    );
}

#[test]
fn pool_weighted_single_interval_of_three() {
    let x = column(&[1.0, 2.0, 3.0, 10.0, 20.0, 30.0]);
    let y = align(&x, 2, Operator::Pool, Some(PoolType::Weighted)).unwrap();
    assert_eq!(y.data(), [2.0, 20.0]);
}

#[test]
fn hybrid_down_example() {
    let xs = [1.0, 9.0, -3.0, 4.0, 2.0, 7.0, 0.5, 6.0, 5.0];
    let y = align(&column(&xs), 3, Operator::Hybrid, None).unwrap();
    let mid = (xs[0] + xs[4] + xs[8]) / 3.0;
    assert_eq!(y.data()[0], xs[0]);
    assert!((y.data()[1] - mid).abs() < 1e-12);
    assert_eq!(y.data()[2], xs[8]);
}

#[test]
fn single_step_input_repeats() {
    for (op, pool) in variants() {
        let y = align(&column(&[4.5]), 6, op, pool).unwrap();
        assert_eq!(y.data(), [4.5; 6], "{op}");
    }
}

#[test]
fn rejects_short_target_and_missing_pool_type() {
    let x = column(&[1.0, 2.0, 3.0]);
    assert!(align(&x, 1, Operator::Linear, None).is_err());
    assert!(align(&x, 4, Operator::Pool, None).is_err());
}

#[test]
fn candidate_names_round_trip() {
    for op in Operator::ALL {
        assert_eq!(op.name().parse::<Operator>().unwrap(), op);
    }
    for p in PoolType::ALL {
        assert_eq!(p.name().parse::<PoolType>().unwrap(), p);
    }
}

#[test]
fn every_operator_in_every_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (op, pool) in variants() {
        for (t, l_p) in [(40, 12), (97, 8), (5, 12), (3, 48), (12, 12), (1, 4)] {
            check_resample(op, pool, t, l_p, 3, &mut rng).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shape_constant_and_feature_independence(
        (op, pool) in variant(),
        t in 1usize..120,
        l_p in 2usize..60,
        f in 1usize..4,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(check_resample(op, pool, t, l_p, f, &mut rng), Ok(()));
    }

    #[test]
    fn bounded_operators_stay_in_range(
        which in 0usize..BOUNDED.len(),
        xs in prop::collection::vec(-100.0f64..100.0, 1..80),
        l_p in 2usize..60,
    ) {
        let (op, pool) = BOUNDED[which];
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for v in align_column(&xs, l_p, op, pool) {
            prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9, "{op}: {v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn linear_identity_at_equal_length(xs in prop::collection::vec(-10.0f64..10.0, 2..50)) {
        prop_assert_eq!(align_column(&xs, xs.len(), Operator::Linear, None), xs);
    }
}
