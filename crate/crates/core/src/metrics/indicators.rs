use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Bi-objective point, both coordinates minimized.
pub type Point<T> = [T; 2];

/// Pareto dominance under minimization.
pub fn dominates<T: Scalar>(a: &Point<T>, b: &Point<T>) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// Duplicate-free non-dominated subset, sorted by `f1` ascending.
pub fn non_dominated<T: Scalar>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut sorted: Vec<Point<T>> = points.to_vec();
    sorted.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .expect("finite point")
            .then(a[1].partial_cmp(&b[1]).expect("finite point"))
    });
    let mut out: Vec<Point<T>> = Vec::new();
    for p in sorted {
        // after sorting, p is dominated or duplicated iff its f2 is not
        // strictly below every kept point
        if out.last().is_none_or(|last| p[1] < last[1]) {
            out.push(p);
        }
    }
    out
}

/// Mean distance from each reference point to its nearest point of `a`.
pub fn igd<T: Scalar>(a: &[Point<T>], reference: &[Point<T>]) -> Result<T> {
    if a.is_empty() || reference.is_empty() {
        return Err(invalid("IGD requires non-empty point sets"));
    }
    let total = reference.iter().fold(T::zero(), |acc, z| {
        let nearest = a
            .iter()
            .map(|p| ((p[0] - z[0]).powi(2) + (p[1] - z[1]).powi(2)).sqrt())
            .fold(T::infinity(), T::min);
        acc + nearest
    });
    Ok(total / T::from_usize_lossy(reference.len()))
}

/// Area dominated by `a` and bounded by `r`. Points that do not strictly
/// dominate `r` in both coordinates contribute nothing.
pub fn hv<T: Scalar>(a: &[Point<T>], r: &Point<T>) -> T {
    let inside: Vec<Point<T>> = a.iter().copied().filter(|p| p[0] < r[0] && p[1] < r[1]).collect();
    let front = non_dominated(&inside);
    let mut area = T::zero();
    for (i, p) in front.iter().enumerate() {
        let next = front.get(i + 1).map_or(r[0], |q| q[0]);
        area = area + (next - p[0]) * (r[1] - p[1]);
    }
    area
}

/// Union of the given sets reduced to its duplicate-free non-dominated subset.
pub fn merged_reference_front<T: Scalar>(sets: &[Vec<Point<T>>]) -> Vec<Point<T>> {
    non_dominated(&sets.concat())
}
