use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Search stage selected by the stage factor `φ_t = t / T_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Early,
    Middle,
    Late,
}

/// Offspring source ratios `(ρ_par, ρ_hot, ρ_nh)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRatios {
    pub parent: f64,
    pub hot: f64,
    pub non_hot: f64,
}

impl StageRatios {
    pub const fn new(parent: f64, hot: f64, non_hot: f64) -> Self {
        Self { parent, hot, non_hot }
    }

    /// `(N_par, N_hot, N_nh)` for `n` offspring slots.
    pub fn counts(&self, n: usize) -> (usize, usize, usize) {
        // the guard absorbs products such as 0.6 * 50 = 29.999...
        let floor = |r: f64| ((r * n as f64) + 1e-9).floor() as usize;
        let par = floor(self.parent).min(n);
        let hot = floor(self.hot).min(n - par);
        (par, hot, n - par - hot)
    }
}

/// Stage-dependent scoring and player-tracking parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageParams {
    pub kappa1: f64,
    pub kappa2: f64,
    /// Crowding bonus in the rank-diversity score.
    pub lambda: f64,
    /// Weight of `f1` in the objective-guided score.
    pub w: f64,
    /// Crowding bonus in the late stage.
    pub gamma: f64,
    /// Ratios for the early, middle and late stages.
    pub ratios: [StageRatios; 3],
    /// Hot fraction by heat.
    pub q: f64,
    /// Cold fraction by count.
    pub p: f64,
    /// Cold bonus.
    pub o: f64,
    /// Cross-pool mutation probability.
    pub e: f64,
    /// Cap on mutated dimensions per individual; `None` means `min(6, D)`.
    pub m_max: Option<usize>,
}

impl StageParams {
    fn with(kappa1: f64, kappa2: f64, w: f64) -> Self {
        Self {
            kappa1,
            kappa2,
            lambda: 0.2,
            w,
            gamma: 0.05,
            ratios: [
                StageRatios::new(0.8, 0.1, 0.1),
                StageRatios::new(0.6, 0.2, 0.2),
                StageRatios::new(0.5, 0.3, 0.2),
            ],
            q: 0.3,
            p: 0.2,
            o: 0.15,
            e: 0.1,
            m_max: None,
        }
    }

    /// Settings for the configuration-search task: `κ = (0.3, 0.6)`, `w = 0.7`.
    pub fn real_task() -> Self {
        Self::with(0.3, 0.6, 0.7)
    }

    /// Settings for the synthetic benchmarks: `κ = (0.2, 0.4)`, `w = 0.5`.
    pub fn benchmark() -> Self {
        Self::with(0.2, 0.4, 0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.kappa1 && self.kappa1 < self.kappa2 && self.kappa2 <= 1.0) {
            return Err(invalid("stage thresholds need 0 <= kappa1 < kappa2 <= 1"));
        }
        for r in &self.ratios {
            let parts = [r.parent, r.hot, r.non_hot];
            if parts.iter().any(|v| *v < 0.0) || (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(invalid("each stage ratio triple must be non-negative and sum to 1"));
            }
        }
        if !(self.o > 0.0) {
            return Err(invalid("cold bonus must be positive"));
        }
        if !(0.0..=1.0).contains(&self.e) || !(0.0..=1.0).contains(&self.q) || !(0.0..=1.0).contains(&self.p) {
            return Err(invalid("q, p and e must lie in [0, 1]"));
        }
        if self.lambda < 0.0 || self.gamma < 0.0 || !(0.0..=1.0).contains(&self.w) {
            return Err(invalid("lambda and gamma must be non-negative and w in [0, 1]"));
        }
        if self.m_max == Some(0) {
            return Err(invalid("m_max must be positive"));
        }
        Ok(())
    }

    pub fn stage(&self, phi: f64) -> Stage {
        if phi < self.kappa1 {
            Stage::Early
        } else if phi < self.kappa2 {
            Stage::Middle
        } else {
            Stage::Late
        }
    }

    pub fn ratios_at(&self, phi: f64) -> StageRatios {
        match self.stage(phi) {
            Stage::Early => self.ratios[0],
            Stage::Middle => self.ratios[1],
            Stage::Late => self.ratios[2],
        }
    }

    /// Blend coefficient `α_t = (κ2 - φ) / (κ2 - κ1)`.
    pub fn alpha(&self, phi: f64) -> f64 {
        (self.kappa2 - phi) / (self.kappa2 - self.kappa1)
    }

    pub fn m_max(&self, dims: usize) -> usize {
        self.m_max.unwrap_or(6).min(dims).max(1)
    }
}

/// Variation and encoding settings shared by both algorithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationParams {
    /// Crossover probability per parent pair.
    pub p_c: f64,
    /// Per-offspring mutation gate.
    pub p_m: f64,
    pub eta_c: f64,
    pub eta_m: f64,
    /// Dedup retries per offspring slot.
    pub n_trial: usize,
}

impl Default for VariationParams {
    fn default() -> Self {
        Self {
            p_c: 0.8,
            p_m: 0.2,
            eta_c: 15.0,
            eta_m: 20.0,
            n_trial: crate::space::DEFAULT_N_TRIAL,
        }
    }
}

impl VariationParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_c) || !(0.0..=1.0).contains(&self.p_m) {
            return Err(invalid("p_c and p_m must lie in [0, 1]"));
        }
        if !(self.eta_c >= 0.0 && self.eta_m >= 0.0) {
            return Err(invalid("distribution indices must be non-negative"));
        }
        if self.n_trial == 0 {
            return Err(invalid("n_trial must be positive"));
        }
        Ok(())
    }
}

/// Windowed stagnation thresholds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EarlyStopParams {
    pub window: usize,
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps_hv: f64,
}

impl Default for EarlyStopParams {
    fn default() -> Self {
        Self {
            window: 8,
            eps0: 1e-12,
            eps1: 1e-3,
            eps2: 1e-3,
            eps_hv: 1e-4,
        }
    }
}
