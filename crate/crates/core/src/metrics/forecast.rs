use serde::Serialize;

use super::METRIC_EPS;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetMetrics<T> {
    pub mse: T,
    pub mae: T,
    /// Percent.
    pub mape: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForecastReport<T> {
    pub per_target: Vec<TargetMetrics<T>>,
    pub nmse: T,
    pub nmae: T,
    pub mape_mean: T,
}

/// Per-target and target-averaged forecast errors. `truth` and `pred` are
/// `N` rows of `K` targets; `sigma` holds each target's standard deviation.
pub fn forecast_metrics<T: Scalar>(truth: &[Vec<T>], pred: &[Vec<T>], sigma: &[T]) -> Result<ForecastReport<T>> {
    let k = sigma.len();
    if truth.is_empty() || truth.len() != pred.len() {
        return Err(invalid("truth and prediction must have the same non-zero row count"));
    }
    if truth.iter().chain(pred).any(|row| row.len() != k) {
        return Err(invalid(format!("every row must have {k} targets")));
    }
    if sigma.iter().any(|s| *s < T::zero()) {
        return Err(invalid("target standard deviations must be non-negative"));
    }
    let n = T::from_usize_lossy(truth.len());
    let eps = T::lit(METRIC_EPS);
    let hundred = T::lit(100.0);
    let per_target: Vec<TargetMetrics<T>> = (0..k)
        .map(|j| {
            let (mut se, mut ae, mut pe) = (T::zero(), T::zero(), T::zero());
            for (y, yh) in truth.iter().zip(pred) {
                let r = y[j] - yh[j];
                se = se + r * r;
                ae = ae + r.abs();
                pe = pe + (r / (y[j] + eps)).abs();
            }
            TargetMetrics {
                mse: se / n,
                mae: ae / n,
                mape: hundred * pe / n,
            }
        })
        .collect();
    let kf = T::from_usize_lossy(k.max(1));
    let sum = |f: &dyn Fn(usize, &TargetMetrics<T>) -> T| {
        per_target.iter().enumerate().fold(T::zero(), |a, (j, m)| a + f(j, m)) / kf
    };
    let nmse = sum(&|j, m| m.mse / (sigma[j] * sigma[j] + eps));
    let nmae = sum(&|j, m| m.mae / (sigma[j] + eps));
    let mape_mean = sum(&|_, m| m.mape);
    Ok(ForecastReport {
        per_target,
        nmse,
        nmae,
        mape_mean,
    })
}
