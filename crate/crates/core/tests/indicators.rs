mod common;

use phmoea_core::bench::{reference_front, Variant};
use phmoea_core::metrics::{dominates, hv, igd, merged_reference_front};
use phmoea_core::Point64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{monte_carlo_hv, random_front};

/// Exact area of the union of boxes `[p, r]` by coordinate compression.
fn union_area(points: &[Point64], r: Point64) -> f64 {
    let mut xs: Vec<f64> = points.iter().map(|p| p[0].min(r[0])).chain([r[0]]).collect();
    let mut ys: Vec<f64> = points.iter().map(|p| p[1].min(r[1])).chain([r[1]]).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    xs.dedup();
    ys.dedup();
    let mut area = 0.0;
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            let (cx, cy) = (xs[i], ys[j]);
            if points.iter().any(|p| p[0] <= cx && p[1] <= cy) {
                area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
            }
        }
    }
    area
}

fn points(max: usize) -> impl Strategy<Value = Vec<Point64>> {
    prop::collection::vec((0.0f64..1.5, 0.0f64..1.5).prop_map(|(a, b)| [a, b]), 1..max)
}

#[test]
fn hv_within_three_standard_errors_of_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in [1, 2, 3, 5, 8, 13, 21, 34, 55, 89] {
        let front = random_front(n, &mut rng);
        let r = [1.1, 1.1];
        let (est, se) = monte_carlo_hv(&front, r, [0.0, 0.0], 200_000, &mut rng);
        assert!((hv(&front, &r) - est).abs() <= 3.0 * se, "n={n}");
    }
}

#[test]
fn igd_of_origin_against_two_corners_is_one() {
    assert_eq!(igd(&[[0.0, 0.0]], &[[0.0, 1.0], [1.0, 0.0]]).unwrap(), 1.0);
}

#[test]
fn dense_hdtlz2_front_approaches_analytic_area() {
    let front = reference_front(Variant::Hdtlz2, 20_000);
    let v = hv(&front, &[1.1, 1.1]);
    let exact = 1.21 - std::f64::consts::FRAC_PI_4;
    assert!(v <= exact + 1e-12);
    assert!(exact - v < 1e-3);
}

proptest! {
    #[test]
    fn hv_matches_union_of_boxes(pts in points(25)) {
        let r = [1.1, 1.1];
        prop_assert!((hv(&pts, &r) - union_area(&pts, r)).abs() < 1e-12);
    }

    #[test]
    fn hv_is_monotone_under_insertion(pts in points(20), extra in (0.0f64..1.5, 0.0f64..1.5)) {
        let r = [1.1, 1.1];
        let mut more = pts.clone();
        more.push([extra.0, extra.1]);
        prop_assert!(hv(&more, &r) >= hv(&pts, &r) - 1e-15);
    }

    #[test]
    fn igd_ignores_duplicates(pts in points(15), reference in points(15)) {
        let doubled: Vec<Point64> = pts.iter().chain(&pts).copied().collect();
        prop_assert_eq!(igd(&doubled, &reference).unwrap(), igd(&pts, &reference).unwrap());
    }

    #[test]
    fn merged_front_is_mutually_non_dominated(a in points(20), b in points(20)) {
        let m = merged_reference_front(&[a.clone(), b.clone()]);
        for p in &m {
            prop_assert!(m.iter().all(|q| !dominates(q, p)));
        }
        // every input point is matched or dominated by the merged front
        for p in a.iter().chain(&b) {
            prop_assert!(m.iter().any(|q| q == p || dominates(q, p)));
        }
    }
}
