use super::params::{Stage, StageParams};

/// Inputs of the stage score for one individual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreInput {
    /// 0-based non-dominated rank.
    pub rank: usize,
    /// Normalized crowding in `[0, 1]`.
    pub crowding: f64,
    /// Normalized objectives.
    pub f: [f64; 2],
}

/// Stage score `R_i`.
pub fn stage_score(x: &ScoreInput, phi: f64, params: &StageParams) -> f64 {
    let s = 1.0 / (1.0 + x.rank as f64) + params.lambda * x.crowding;
    let g = params.w * x.f[0] + (1.0 - params.w) * x.f[1];
    match params.stage(phi) {
        Stage::Early => s,
        Stage::Middle => {
            let a = params.alpha(phi);
            a * s + (1.0 - a) * g
        }
        Stage::Late => g + params.gamma * x.crowding,
    }
}

/// Scores and simplex weights `ω_i = R_i / Σ R_j`; uniform when `Σ R = 0`.
pub fn scores_and_weights(inputs: &[ScoreInput], phi: f64, params: &StageParams) -> (Vec<f64>, Vec<f64>) {
    let scores: Vec<f64> = inputs.iter().map(|x| stage_score(x, phi, params)).collect();
    let total: f64 = scores.iter().sum();
    let weights = if total > 0.0 {
        scores.iter().map(|r| r / total).collect()
    } else {
        vec![1.0 / inputs.len().max(1) as f64; inputs.len()]
    };
    (scores, weights)
}
