//! Full-batch gradient descent shared by every [`Model`].

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data::AggregatedDataset;
use crate::error::{Error, Result};
use crate::models::{Model, ModelSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    /// Stop once `|L(t) - L(t-1)|` drops below this.
    pub loss_delta_threshold: f64,
    pub max_iterations: usize,
    pub record_trajectory: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            loss_delta_threshold: 1e-7,
            max_iterations: 200_000,
            record_trajectory: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.loss_delta_threshold > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "loss delta threshold must be positive, got {}",
                self.loss_delta_threshold
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub final_loss: f64,
    /// Number of weight updates applied.
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_trajectory: Option<Vec<f64>>,
    pub final_weights: ModelSnapshot,
}

/// Runs `w <- w - lr * dL/dw` until the loss change falls under the
/// threshold or the iteration budget is spent. The model is updated in
/// place.
pub fn train(
    model: &mut dyn Model,
    data: &AggregatedDataset,
    config: &TrainConfig,
) -> Result<TrainReport> {
    config.validate()?;
    let mut params = model.params();
    let mut trajectory = config.record_trajectory.then(Vec::new);
    let mut previous: Option<f64> = None;
    let mut iteration = 0usize;
    loop {
        let lg = model.loss_grad(data)?;
        if !lg.loss.is_finite() || lg.grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence {
                iteration,
                loss: lg.loss,
            });
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(lg.loss);
        }
        let converged = previous.is_some_and(|p| (p - lg.loss).abs() < config.loss_delta_threshold);
        if converged || iteration == config.max_iterations {
            return Ok(TrainReport {
                final_loss: lg.loss,
                iterations: iteration,
                converged,
                loss_trajectory: trajectory,
                final_weights: model.snapshot(),
            });
        }
        for (p, g) in params.iter_mut().zip(&lg.grad) {
            *p -= config.learning_rate * g;
        }
        model.set_params(&params)?;
        previous = Some(lg.loss);
        iteration += 1;
    }
}

/// `iteration,loss` CSV of a recorded trajectory.
pub fn write_trajectory_csv<W: Write>(mut writer: W, trajectory: &[f64]) -> Result<()> {
    writeln!(writer, "iteration,loss")?;
    for (i, l) in trajectory.iter().enumerate() {
        writeln!(writer, "{i},{l:e}")?;
    }
    Ok(())
}
