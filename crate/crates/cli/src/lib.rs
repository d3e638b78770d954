//! Experiment runner for the classical, single-qubit and entangled
//! perceptrons: configuration, the experiment registry and artifact output.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{ExperimentConfig, GradientChoice};
pub use error::{ExperimentError, Result};
pub use experiments::{Experiment, ExperimentRegistry, ExperimentResult};
