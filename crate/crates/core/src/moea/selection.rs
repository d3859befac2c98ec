use super::sorting::{crowding, nd_sort};
use crate::metrics::Point;

/// NSGA-II elitist truncation. Returns the indices of the survivors: whole
/// fronts in rank order, the split front by descending crowding (ties by
/// index). Yields `min(n, points.len())` indices.
pub fn environmental_select(points: &[Point<f64>], n: usize) -> Vec<usize> {
    let (_, fronts) = nd_sort(points);
    let mut out = Vec::with_capacity(n.min(points.len()));
    for front in fronts {
        if out.len() + front.len() <= n {
            out.extend(front);
            continue;
        }
        let dist = crowding(points, &front);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| dist[b].partial_cmp(&dist[a]).expect("no NaN crowding").then(a.cmp(&b)));
        out.extend(order.into_iter().take(n - out.len()).map(|k| front[k]));
        break;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_all_when_non_dominated() {
        let pts: Vec<Point<f64>> = (0..5).map(|i| [i as f64, 4.0 - i as f64]).collect();
        let mut s = environmental_select(&pts, 5);
        s.sort_unstable();
        assert_eq!(s, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn dominating_clones_win() {
        let mut pts: Vec<Point<f64>> = (0..4).map(|i| [i as f64 + 1.0, 5.0 - i as f64]).collect();
        pts.extend((0..4).map(|i| [i as f64, 4.0 - i as f64]));
        let mut s = environmental_select(&pts, 4);
        s.sort_unstable();
        assert_eq!(s, vec![4, 5, 6, 7]);
    }

    #[test]
    fn truncation_keeps_boundaries() {
        let pts: Vec<Point<f64>> = (0..6).map(|i| [i as f64, 5.0 - i as f64]).collect();
        let s = environmental_select(&pts, 2);
        let mut s2 = s.clone();
        s2.sort_unstable();
        assert_eq!(s2, vec![0, 5]);
        assert_eq!(environmental_select(&pts, 10).len(), 6);
    }
}
