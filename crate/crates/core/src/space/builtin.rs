use std::sync::OnceLock;

use super::ConfigSpace;

/// Declarative document of the built-in 24-dimension forecasting
/// configuration space.
pub const BUILTIN_SPACE_JSON: &str = include_str!("builtin_space.json");

/// The built-in 24-dimension configuration space for the multi-scale
/// bi-branch convolutional forecaster.
pub fn builtin_space() -> ConfigSpace {
    static SPACE: OnceLock<ConfigSpace> = OnceLock::new();
    SPACE
        .get_or_init(|| ConfigSpace::from_json(BUILTIN_SPACE_JSON).expect("embedded space is valid"))
        .clone()
}
