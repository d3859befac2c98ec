//! Budgeted bi-objective evolutionary auto-configuration over hierarchical
//! conditional mixed search spaces.
//!
//! The crate is organised by subsystem:
//!
//! - [`space`]: variable specifications, index encoding, decoding, repair,
//!   canonical deduplication and adaptive refinement of continuous bins.
//! - [`netspec`]: network description and exact trainable-parameter counting.
//! - [`resample`]: the six sequence alignment operators.
//! - [`moea`]: the player-tracking search engine and an NSGA-II baseline.
//! - [`bench`]: hierarchical DTLZ2/DTLZ7 benchmark problems.
//! - [`metrics`]: IGD, hypervolume, forecast metrics and the loss family.
//! - [`eval`]: benchmark, surrogate and external-process evaluators.
//!
//! Numeric kernels are generic over [`Scalar`] (`f32` or `f64`); the search
//! engine itself works in `f64`.

pub mod bench;
pub mod error;
pub mod eval;
pub mod metrics;
pub mod moea;
pub mod netspec;
pub mod resample;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Bi-objective point in `f64`.
pub type Point64 = metrics::Point<f64>;
/// Bi-objective point in `f32`.
pub type Point32 = metrics::Point<f32>;
/// Time-major real matrix in `f64`.
pub type Series64 = resample::Series<f64>;
/// Time-major real matrix in `f32`.
pub type Series32 = resample::Series<f32>;
