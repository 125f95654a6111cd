//! Bidirectional proximal causal inference.
//!
//! Estimates the reciprocal effects `beta_xy` (X on Y) and `beta_yx` (Y on X)
//! in a linear feedback system with an unmeasured confounder U, using a
//! proxy Z that affects only X and a proxy W that affects only Y.
//!
//! * [`model`]: structural and reduced-form parameters and the maps between them.
//! * [`regression`]: least squares via Householder QR.
//! * [`estimators`]: Bi-TSLS and the OLS / IV comparators.
//! * [`inference`]: nonparametric bootstrap, sensitivity-adjusted intervals.
//! * [`simulation`]: seeded data generation from the feedback system.
//! * [`experiments`]: Monte Carlo studies over scenarios and parameter grids.
//! * [`io`] and [`commands`]: CSV loading and the command-line operations.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod inference;
pub mod io;
pub mod model;
pub mod regression;
pub mod simulation;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use estimators::{BasisKind, BasisSpec, Direction, EstimateResult, Method};
pub use inference::{BootstrapConfig, InferenceResult};
pub use model::{ProxyParams, ReducedFormParams, StructuralParams};
pub use simulation::{NoiseScenario, ScenarioConfig};
