//! Quality indicators, forecast error metrics and the training-loss family.

mod forecast;
mod indicators;
mod loss;

pub use forecast::{forecast_metrics, ForecastReport, TargetMetrics};
pub use indicators::{dominates, hv, igd, merged_reference_front, non_dominated, Point};
pub use loss::{loss, LossKind, LossParams};

/// Denominator stabilizer for metrics and losses.
pub const METRIC_EPS: f64 = 1e-8;
