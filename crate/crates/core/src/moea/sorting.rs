use crate::metrics::{dominates, Point};

/// Stabilizer of the per-generation normalization.
pub const NORM_EPS: f64 = 1e-12;

/// Fast non-dominated sorting. Returns the 0-based rank of every point and
/// the fronts as index lists in ascending rank order.
pub fn nd_sort(points: &[Point<f64>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&points[i], &points[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut ranks = vec![0usize; n];
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            ranks[i] = rank;
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
        rank += 1;
    }
    (ranks, fronts)
}

/// NSGA-II crowding distance of the members of one front. Boundary points
/// per objective are infinite; a degenerate objective contributes nothing.
pub fn crowding(points: &[Point<f64>], front: &[usize]) -> Vec<f64> {
    let k = front.len();
    let mut dist = vec![0.0; k];
    if k <= 2 {
        return vec![f64::INFINITY; k];
    }
    for m in 0..2 {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            points[front[a]][m]
                .partial_cmp(&points[front[b]][m])
                .expect("finite objectives")
                .then(a.cmp(&b))
        });
        let lo = points[front[order[0]]][m];
        let hi = points[front[order[k - 1]]][m];
        dist[order[0]] = f64::INFINITY;
        dist[order[k - 1]] = f64::INFINITY;
        if hi - lo <= 0.0 {
            continue;
        }
        for w in 1..k - 1 {
            let gap = points[front[order[w + 1]]][m] - points[front[order[w - 1]]][m];
            dist[order[w]] += gap / (hi - lo);
        }
    }
    dist
}

/// Ranks and crowding distances for a whole population.
pub fn rank_and_crowd(points: &[Point<f64>]) -> (Vec<usize>, Vec<f64>) {
    let (ranks, fronts) = nd_sort(points);
    let mut crowd = vec![0.0; points.len()];
    for front in &fronts {
        for (&i, c) in front.iter().zip(crowding(points, front)) {
            crowd[i] = c;
        }
    }
    (ranks, crowd)
}

/// `(v - min) / (max - min + ε)` over the given values.
pub fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().map(|v| (v - lo) / (hi - lo + NORM_EPS)).collect()
}

/// Normalized crowding: infinite distances map to 1, finite ones are
/// min-max normalized among the finite values.
pub fn normalize_crowding(crowd: &[f64]) -> Vec<f64> {
    let finite: Vec<f64> = crowd.iter().copied().filter(|c| c.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    crowd
        .iter()
        .map(|&c| {
            if c.is_finite() {
                (c - lo) / (hi - lo + NORM_EPS)
            } else {
                1.0
            }
        })
        .collect()
}

/// Per-generation normalized objectives.
pub fn normalize_objectives(points: &[Point<f64>]) -> Vec<Point<f64>> {
    let f1 = min_max_normalize(&points.iter().map(|p| p[0]).collect::<Vec<_>>());
    let f2 = min_max_normalize(&points.iter().map(|p| p[1]).collect::<Vec<_>>());
    f1.into_iter().zip(f2).map(|(a, b)| [a, b]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(nd_sort(&[[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]]).0, vec![0, 0, 0]);
        assert_eq!(nd_sort(&[[1.0, 1.0], [2.0, 2.0]]).0, vec![0, 1]);
        let (r, f) = nd_sort(&[[3.0, 3.0], [1.0, 1.0], [2.0, 2.0], [0.0, 4.0]]);
        assert_eq!(r, vec![2, 0, 1, 0]);
        assert_eq!(f, vec![vec![1, 3], vec![2], vec![0]]);
    }

    #[test]
    fn three_point_crowding() {
        let pts = [[0.0, 4.0], [1.0, 1.0], [4.0, 0.0]];
        let c = crowding(&pts, &[0, 1, 2]);
        assert!(c[0].is_infinite() && c[2].is_infinite());
        assert!((c[1] - (4.0 / 4.0 + 4.0 / 4.0)).abs() < 1e-12);
        let pts = [[0.0, 4.0], [1.0, 3.0], [2.0, 1.0], [4.0, 0.0]];
        let c = crowding(&pts, &[0, 1, 2, 3]);
        assert!((c[1] - (2.0 / 4.0 + 3.0 / 4.0)).abs() < 1e-12);
        assert!((c[2] - (3.0 / 4.0 + 3.0 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn normalization() {
        let n = min_max_normalize(&[2.0, 4.0, 6.0]);
        assert!(n[0] == 0.0 && (n[1] - 0.5).abs() < 1e-9 && (n[2] - 1.0).abs() < 1e-9);
        assert_eq!(min_max_normalize(&[3.0, 3.0]), vec![0.0, 0.0]);
        let c = normalize_crowding(&[f64::INFINITY, 0.5, 1.5, f64::INFINITY]);
        assert_eq!(c[0], 1.0);
        assert_eq!(c[1], 0.0);
        assert!((c[2] - 1.0).abs() < 1e-9);
    }
}
