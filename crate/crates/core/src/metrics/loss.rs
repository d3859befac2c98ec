use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::METRIC_EPS;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LossKind {
    #[serde(rename = "MSE")]
    Mse,
    #[serde(rename = "MAE")]
    Mae,
    SmoothL1,
    #[serde(rename = "MAPE")]
    Mape,
    Huber,
    LogCosh,
    Quantile,
    #[serde(rename = "SMAPE")]
    Smape,
    #[serde(rename = "multi_quantile")]
    MultiQuantile,
    Combined,
    AdaptiveCombined,
}

impl LossKind {
    pub const ALL: [LossKind; 11] = [
        LossKind::Mse,
        LossKind::Mae,
        LossKind::SmoothL1,
        LossKind::Mape,
        LossKind::Huber,
        LossKind::LogCosh,
        LossKind::Quantile,
        LossKind::Smape,
        LossKind::MultiQuantile,
        LossKind::Combined,
        LossKind::AdaptiveCombined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LossKind::Mse => "MSE",
            LossKind::Mae => "MAE",
            LossKind::SmoothL1 => "SmoothL1",
            LossKind::Mape => "MAPE",
            LossKind::Huber => "Huber",
            LossKind::LogCosh => "LogCosh",
            LossKind::Quantile => "Quantile",
            LossKind::Smape => "SMAPE",
            LossKind::MultiQuantile => "multi_quantile",
            LossKind::Combined => "Combined",
            LossKind::AdaptiveCombined => "AdaptiveCombined",
        }
    }

    fn is_composite(self) -> bool {
        matches!(self, LossKind::Combined | LossKind::AdaptiveCombined)
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown loss {s}")))
    }
}

/// Fixed loss constants plus the composite-loss selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossParams {
    /// SmoothL1 transition.
    pub beta: f64,
    /// Huber threshold.
    pub delta: f64,
    /// Pinball quantile.
    pub tau: f64,
    /// Component pair for the composite kinds.
    pub pair: Option<(LossKind, LossKind)>,
    /// Component weights for `AdaptiveCombined`; they stay at their
    /// initialization.
    pub weights: Option<(f64, f64)>,
}

impl Default for LossParams {
    fn default() -> Self {
        Self {
            beta: 1.0,
            delta: 1.0,
            tau: 0.5,
            pair: None,
            weights: None,
        }
    }
}

const MULTI_QUANTILES: [f64; 3] = [0.1, 0.5, 0.9];

fn pinball<T: Scalar>(r: T, tau: T) -> T {
    (tau * r).max((tau - T::one()) * r)
}

/// `log cosh r` without overflow for large `|r|`.
fn log_cosh<T: Scalar>(r: T) -> T {
    let a = r.abs();
    a + (-(a + a)).exp().ln_1p() - T::LN_2()
}

fn elementwise<T: Scalar>(kind: LossKind, y: T, yh: T, p: &LossParams) -> T {
    let r = y - yh;
    let a = r.abs();
    let eps = T::lit(METRIC_EPS);
    let half = T::lit(0.5);
    match kind {
        LossKind::Mse => r * r,
        LossKind::Mae => a,
        LossKind::SmoothL1 => {
            let beta = T::lit(p.beta);
            if a < beta {
                half * r * r / beta
            } else {
                a - half * beta
            }
        }
        LossKind::Mape => T::lit(100.0) * a / (y.abs() + eps),
        LossKind::Huber => {
            let delta = T::lit(p.delta);
            if a <= delta {
                half * r * r
            } else {
                delta * (a - half * delta)
            }
        }
        LossKind::LogCosh => log_cosh(r),
        LossKind::Quantile => pinball(r, T::lit(p.tau)),
        LossKind::Smape => T::lit(200.0) * a / (y.abs() + yh.abs() + eps),
        LossKind::MultiQuantile => {
            MULTI_QUANTILES
                .iter()
                .fold(T::zero(), |s, &q| s + pinball(r, T::lit(q)))
                / T::from_usize_lossy(MULTI_QUANTILES.len())
        }
        LossKind::Combined | LossKind::AdaptiveCombined => unreachable!("composite kinds reduce by parts"),
    }
}

/// Mean loss over all `N x K` entries of `truth` and `pred`.
pub fn loss<T: Scalar>(kind: LossKind, truth: &[Vec<T>], pred: &[Vec<T>], params: &LossParams) -> Result<T> {
    if truth.is_empty() || truth.len() != pred.len() || truth.iter().zip(pred).any(|(a, b)| a.len() != b.len()) {
        return Err(invalid("loss inputs must have matching non-empty shapes"));
    }
    if kind.is_composite() {
        let (a, b) = params
            .pair
            .ok_or_else(|| invalid(format!("{} requires a component pair", kind.name())))?;
        if a.is_composite() || b.is_composite() {
            return Err(invalid("composite losses cannot nest"));
        }
        let (w1, w2) = match kind {
            LossKind::Combined => (0.5, 0.5),
            _ => {
                let (w1, w2) = params
                    .weights
                    .ok_or_else(|| invalid("AdaptiveCombined requires weights"))?;
                if w1 < 0.0 || w2 < 0.0 || ((w1 + w2) - 1.0).abs() > 1e-9 {
                    return Err(invalid("AdaptiveCombined weights must be non-negative and sum to 1"));
                }
                (w1, w2)
            }
        };
        return Ok(T::lit(w1) * loss(a, truth, pred, params)? + T::lit(w2) * loss(b, truth, pred, params)?);
    }
    let mut total = T::zero();
    let mut count = 0usize;
    for (y, yh) in truth.iter().zip(pred) {
        for (&a, &b) in y.iter().zip(yh) {
            total = total + elementwise(kind, a, b, params);
            count += 1;
        }
    }
    if count == 0 {
        return Err(invalid("loss inputs have no entries"));
    }
    Ok(total / T::from_usize_lossy(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(kind: LossKind, y: f64, yh: f64) -> f64 {
        loss(kind, &[vec![y]], &[vec![yh]], &LossParams::default()).unwrap()
    }

    #[test]
    fn log_cosh_values() {
        assert_eq!(single(LossKind::LogCosh, 0.0, 0.0), 0.0);
        assert!((single(LossKind::LogCosh, 1.0, 0.0) - 1f64.cosh().ln()).abs() < 1e-15);
        assert!((single(LossKind::LogCosh, 1000.0, 0.0) - (1000.0 - 2f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn quantile_half_is_half_mae() {
        let y = vec![vec![1.0f64, -2.0], vec![0.5, 3.0]];
        let p = vec![vec![0.0, 1.0], vec![2.0, 3.5]];
        let q = loss(LossKind::Quantile, &y, &p, &LossParams::default()).unwrap();
        let m = loss(LossKind::Mae, &y, &p, &LossParams::default()).unwrap();
        assert!((q - 0.5 * m).abs() < 1e-15);
    }

    #[test]
    fn piecewise_branches() {
        assert_eq!(single(LossKind::SmoothL1, 0.5, 0.0), 0.125);
        assert_eq!(single(LossKind::SmoothL1, 3.0, 0.0), 2.5);
        assert_eq!(single(LossKind::Huber, 1.0, 0.0), 0.5);
        assert_eq!(single(LossKind::Huber, 3.0, 0.0), 2.5);
        assert!((single(LossKind::MultiQuantile, 1.0, 0.0) - 0.5).abs() < 1e-15);
        assert!((single(LossKind::Smape, 1.0, 3.0) - 100.0).abs() < 1e-6);
        assert_eq!(single(LossKind::Smape, 2.0, 2.0), 0.0);
    }

    #[test]
    fn composites() {
        let y = [vec![1.0f64]];
        let p = [vec![3.0]];
        let params = LossParams {
            pair: Some((LossKind::Mse, LossKind::Mae)),
            weights: Some((0.9, 0.1)),
            ..LossParams::default()
        };
        assert_eq!(loss(LossKind::Combined, &y, &p, &params).unwrap(), 3.0);
        assert!((loss(LossKind::AdaptiveCombined, &y, &p, &params).unwrap() - 3.8).abs() < 1e-12);
        assert!(loss(LossKind::Combined, &y, &p, &LossParams::default()).is_err());
    }
}
