//! Density-matrix perceptrons.
//!
//! A classical logistic perceptron, a single-qubit perceptron and an
//! entangled two-qubit perceptron, all trained by full-batch gradient descent
//! on a (quantum) log-likelihood over discrete, duplicated data.
//!
//! - [`qm`]: 2x2 Hermitian matrices, Pauli matrices, Bloch states, matrix log.
//! - [`data`]: samples, per-pattern label statistics, toy-problem generators.
//! - [`models`]: the [`models::Model`] trait, its three implementations and a
//!   name-keyed registry.
//! - [`training`]: gradient descent with loss-delta convergence.
//! - [`analysis`]: expectation grids and boundary residuals.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod data;
pub mod error;
pub mod models;
pub mod qm;
pub mod training;

pub use error::{Error, Result};
