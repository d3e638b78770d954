//! Label-noise sweep on random teacher-student problems.
//!
//! Each repeat index fixes the problem, the train/test split and the order
//! in which training labels are flipped, so every noise level of a repeat
//! flips a superset of the labels flipped at lower levels.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qperceptron_core::data::{
    aggregate, derive_seed, flip_labels, gen_teacher_student, split_train_test,
};
use qperceptron_core::models::{sample_mse, ModelRegistry};

use super::{fit, stream, timed, Experiment, ExperimentResult};
use crate::config::ExperimentConfig;
use crate::error::{Context, ExperimentError, Result};

/// `MSE(classical) - MSE(quantum)` on the clean test split, summarised over
/// repeats at one noise level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaMseRow {
    pub noise_pct: u32,
    pub mean_delta_mse: f64,
    /// Sample standard deviation (`n - 1` denominator).
    pub std_delta_mse: f64,
    pub stderr_delta_mse: f64,
    pub n_repeats: usize,
}

impl DeltaMseRow {
    fn from_deltas(noise_pct: u32, deltas: &[f64]) -> Self {
        let n = deltas.len();
        let mean = deltas.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let std = var.sqrt();
        Self {
            noise_pct,
            mean_delta_mse: mean,
            std_delta_mse: std,
            stderr_delta_mse: std / (n as f64).sqrt(),
            n_repeats: n,
        }
    }
}

pub struct TeacherStudentExperiment;

impl Experiment for TeacherStudentExperiment {
    fn name(&self) -> &str {
        "teacher-student"
    }

    fn description(&self) -> &str {
        "test-MSE gap between classical and single-qubit perceptrons under label noise"
    }

    fn run(&self, config: &ExperimentConfig) -> Result<ExperimentResult> {
        run_teacher_student(config)
    }
}

/// Test MSEs `(classical, quantum)` of one (noise level, repeat) cell.
fn run_cell(
    config: &ExperimentConfig,
    models: &ModelRegistry,
    noise_pct: u32,
    repeat: usize,
) -> Result<(f64, f64)> {
    let r = repeat as u64;
    let (samples, _) = gen_teacher_student(
        config.n_patterns,
        config.d,
        config.duplicates,
        derive_seed(config.seed, stream::PROBLEM, r),
    )
    .context("generating problem")?;
    let (train, test) = split_train_test(
        &samples,
        config.train_fraction,
        derive_seed(config.seed, stream::SPLIT, r),
    )
    .context("splitting")?;
    let noisy = flip_labels(
        &train,
        f64::from(noise_pct) / 100.0,
        derive_seed(config.seed, stream::FLIP, r),
    )
    .context("flipping labels")?;
    let data = aggregate(&noisy).context("aggregating")?;
    let spec = config.model_spec(config.d, derive_seed(config.seed, stream::INIT, r));
    let mut out = [0.0; 2];
    for (slot, name) in out.iter_mut().zip(["classical", "qubit"]) {
        let (model, _) = fit(models, name, &spec, &data, &config.train)?;
        *slot = sample_mse(model.as_ref(), &test).context("test MSE")?;
    }
    Ok((out[0], out[1]))
}

pub fn run_teacher_student(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| ExperimentError::Config(format!("thread pool: {e}")))?;
    let models = ModelRegistry::default();
    let cells: Vec<(u32, usize)> = config
        .noise_levels()
        .into_iter()
        .flat_map(|level| (0..config.repeats).map(move |r| (level, r)))
        .collect();

    let (cell_mse, elapsed) = timed(|| {
        pool.install(|| {
            cells
                .par_iter()
                .map(|&(level, r)| run_cell(config, &models, level, r).map(|m| ((level, r), m)))
                .collect::<Result<BTreeMap<_, _>>>()
        })
    })?;

    let mut result = ExperimentResult::new(config);
    for level in config.noise_levels() {
        let deltas: Vec<f64> = (0..config.repeats)
            .map(|r| {
                let (c, q) = cell_mse[&(level, r)];
                c - q
            })
            .collect();
        let row = DeltaMseRow::from_deltas(level, &deltas);
        result.set(&format!("mean_delta_mse_{level:02}"), row.mean_delta_mse);
        result.delta_mse.push(row);
    }
    let mean_of = |pick: fn(&(f64, f64)) -> f64| {
        cell_mse.values().map(pick).sum::<f64>() / cell_mse.len() as f64
    };
    result.set("mean_test_mse_classical", mean_of(|m| m.0));
    result.set("mean_test_mse_quantum", mean_of(|m| m.1));
    result.note(
        "MSEs are measured on the clean test split; label noise is applied to training labels only",
    );
    result.metadata.elapsed_secs = elapsed;
    Ok(result)
}
