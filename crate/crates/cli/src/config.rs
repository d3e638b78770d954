//! Experiment configuration with per-experiment defaults.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qperceptron_core::models::{GradientMethod, ModelSpec, DEFAULT_FD_STEP, DEFAULT_INIT_SCALE};
use qperceptron_core::qm::DEFAULT_EIGEN_FLOOR;
use qperceptron_core::training::TrainConfig;

use crate::error::{ExperimentError, Result};

/// How the entangled model's gradient is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientChoice {
    FiniteDifference,
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub train: TrainConfig,
    pub bias: bool,
    /// `p(+1|x) > threshold` classifies as +1.
    pub threshold: f64,
    pub grid_res: usize,
    pub grid_range: (f64, f64),

    /// Copies per pattern in the two-dimensional problems.
    pub copies: usize,
    /// Label-noise fraction on the noisy patterns of the four-corner problem.
    pub flip_fraction: f64,

    pub d: usize,
    pub n_patterns: usize,
    pub duplicates: usize,
    pub train_fraction: f64,
    pub noise_max_pct: u32,
    pub noise_step_pct: u32,
    pub repeats: usize,
    /// Worker threads for independent cells; 0 picks the machine default.
    pub jobs: usize,

    /// Seeded restarts of the entangled model.
    pub max_attempts: usize,
    pub loss_target: f64,
    pub gradient: GradientChoice,
    pub fd_step: f64,
    pub init_scale: f64,
    pub eigen_floor: f64,
}

impl ExperimentConfig {
    /// Defaults for `experiment`; the bias is off only for teacher-student,
    /// whose teacher has none.
    pub fn defaults_for(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed: 0,
            train: TrainConfig::default(),
            bias: experiment != "teacher-student",
            threshold: 0.5,
            grid_res: 200,
            grid_range: (-1.5, 1.5),
            copies: 40,
            flip_fraction: 0.3,
            d: 8,
            n_patterns: 600,
            duplicates: 5,
            train_fraction: 0.8,
            noise_max_pct: 50,
            noise_step_pct: 5,
            repeats: 100,
            jobs: 0,
            max_attempts: 5,
            loss_target: 0.05,
            gradient: GradientChoice::FiniteDifference,
            fd_step: DEFAULT_FD_STEP,
            init_scale: DEFAULT_INIT_SCALE,
            eigen_floor: DEFAULT_EIGEN_FLOOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(ExperimentError::Config(msg));
        if let Err(e) = self.train.validate() {
            return fail(e.to_string());
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return fail(format!("threshold {} outside (0, 1)", self.threshold));
        }
        if self.grid_res < 2 {
            return fail(format!("grid resolution {} below 2", self.grid_res));
        }
        if !(self.grid_range.0 < self.grid_range.1) {
            return fail(format!("empty grid range {:?}", self.grid_range));
        }
        if self.copies == 0 || self.d == 0 || self.n_patterns == 0 || self.duplicates == 0 {
            return fail("copies, d, n_patterns and duplicates must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.flip_fraction) {
            return fail(format!(
                "flip fraction {} outside [0, 1]",
                self.flip_fraction
            ));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return fail(format!(
                "train fraction {} outside (0, 1)",
                self.train_fraction
            ));
        }
        if self.noise_max_pct > 50 {
            return fail(format!("noise max {}% above 50%", self.noise_max_pct));
        }
        if self.noise_step_pct == 0 {
            return fail("noise step must be positive".into());
        }
        if self.repeats == 0 || self.max_attempts == 0 {
            return fail("repeats and max_attempts must be positive".into());
        }
        if !(self.loss_target > 0.0) || !(self.fd_step > 0.0) || !(self.init_scale > 0.0) {
            return fail("loss target, fd step and init scale must be positive".into());
        }
        if !(self.eigen_floor > 0.0) {
            return fail(format!("eigen floor {} not positive", self.eigen_floor));
        }
        Ok(())
    }

    /// Noise levels in percent: `0, step, ..., noise_max`.
    pub fn noise_levels(&self) -> Vec<u32> {
        (0..=self.noise_max_pct)
            .step_by(self.noise_step_pct as usize)
            .collect()
    }

    pub fn gradient_method(&self) -> GradientMethod {
        match self.gradient {
            GradientChoice::FiniteDifference => {
                GradientMethod::FiniteDifference { step: self.fd_step }
            }
            GradientChoice::Analytic => GradientMethod::Analytic,
        }
    }

    pub fn model_spec(&self, input_dim: usize, seed: u64) -> ModelSpec {
        ModelSpec {
            input_dim,
            bias: self.bias,
            seed,
            init_scale: self.init_scale,
            eigen_floor: self.eigen_floor,
            gradient: self.gradient_method(),
        }
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serialises");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
