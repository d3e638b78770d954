//! Runnable experiments, each registered by name.

mod entangled;
mod fig1;
mod teacher_student;

pub use entangled::{run_appendix, run_xor, AppendixExperiment, XorExperiment};
pub use fig1::{run_fig1, Fig1Experiment};
pub use teacher_student::{run_teacher_student, DeltaMseRow, TeacherStudentExperiment};

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use qperceptron_core::analysis::ExpectationGrid;
use qperceptron_core::data::{AggregatedDataset, Sample};
use qperceptron_core::models::{Model, ModelRegistry, ModelSnapshot, ModelSpec};
use qperceptron_core::training::{train, TrainConfig, TrainReport};

use crate::config::ExperimentConfig;
use crate::error::{Context, ExperimentError, Result};

/// RNG stream tags passed to `derive_seed`.
pub(crate) mod stream {
    pub const DATA: u64 = 1;
    pub const PROBLEM: u64 = 2;
    pub const SPLIT: u64 = 3;
    pub const FLIP: u64 = 4;
    pub const INIT: u64 = 5;
}

/// A trained model with its training summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub snapshot: ModelSnapshot,
    pub final_loss: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ModelRecord {
    pub fn new(report: &TrainReport) -> Self {
        Self {
            snapshot: report.final_weights.clone(),
            final_loss: report.final_loss,
            iterations: report.iterations,
            converged: report.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub seed: u64,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub elapsed_secs: f64,
    pub notes: Vec<String>,
}

/// Everything an experiment produces. `metrics` holds the scalar outputs
/// keyed by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub metrics: BTreeMap<String, f64>,
    pub models: BTreeMap<String, ModelRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta_mse: Vec<DeltaMseRow>,
    /// Per-pattern diagnostics, e.g. predicted probabilities.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<PatternReport>,
    #[serde(skip)]
    pub grids: BTreeMap<String, ExpectationGrid>,
    #[serde(skip)]
    pub dataset: Vec<Sample>,
    /// Per-iteration training losses, when recorded.
    #[serde(skip)]
    pub trajectories: BTreeMap<String, Vec<f64>>,
    /// Every training run met its stopping criterion and, where a loss
    /// target applies, reached it.
    pub converged: bool,
    pub metadata: RunMetadata,
}

impl ExperimentResult {
    pub(crate) fn new(config: &ExperimentConfig) -> Self {
        Self {
            experiment: config.experiment.clone(),
            metrics: BTreeMap::new(),
            models: BTreeMap::new(),
            delta_mse: Vec::new(),
            patterns: Vec::new(),
            grids: BTreeMap::new(),
            dataset: Vec::new(),
            trajectories: BTreeMap::new(),
            converged: true,
            metadata: RunMetadata {
                seed: config.seed,
                config_hash: config.hash(),
                config: config.clone(),
                elapsed_secs: 0.0,
                notes: Vec::new(),
            },
        }
    }

    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }

    pub(crate) fn set(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    pub(crate) fn note(&mut self, text: impl Into<String>) {
        self.metadata.notes.push(text.into());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub model: String,
    pub pattern: Vec<i8>,
    pub label_mean: f64,
    pub prob_positive: f64,
}

/// One experiment behind a name.
pub trait Experiment: Send + Sync {
    fn name(&self) -> &str;

    fn description(&self) -> &str;

    /// Defaults the CLI starts from before applying overrides.
    fn default_config(&self) -> ExperimentConfig {
        ExperimentConfig::defaults_for(self.name())
    }

    fn run(&self, config: &ExperimentConfig) -> Result<ExperimentResult>;
}

/// Name-keyed table of experiments.
pub struct ExperimentRegistry {
    entries: BTreeMap<String, Box<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, experiment: Box<dyn Experiment>) {
        self.entries
            .insert(experiment.name().to_string(), experiment);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Experiment> {
        self.entries.get(name).map(|e| e.as_ref()).ok_or_else(|| {
            ExperimentError::Config(format!(
                "unknown experiment `{name}` (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Experiment> {
        self.entries.values().map(|e| e.as_ref())
    }
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        use qperceptron_core::data::AppendixProblem;
        let mut reg = Self::empty();
        reg.register(Box::new(Fig1Experiment));
        reg.register(Box::new(TeacherStudentExperiment));
        reg.register(Box::new(XorExperiment));
        for (name, problem) in [
            ("appendix-a", AppendixProblem::NoisyXor),
            ("appendix-b", AppendixProblem::ParallelLines),
            ("appendix-c", AppendixProblem::Ellipse),
            ("appendix-d", AppendixProblem::NonQuadric),
        ] {
            reg.register(Box::new(AppendixExperiment::new(name, problem)));
        }
        reg
    }
}

/// Builds `name` from the model registry and trains it on `data`.
pub(crate) fn fit(
    models: &ModelRegistry,
    name: &str,
    spec: &ModelSpec,
    data: &AggregatedDataset,
    train_config: &TrainConfig,
) -> Result<(Box<dyn Model>, TrainReport)> {
    let mut model = models
        .create(name, spec)
        .context(format!("building {name} model"))?;
    let report =
        train(model.as_mut(), data, train_config).context(format!("training {name} model"))?;
    Ok((model, report))
}

pub(crate) fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64()))
}

pub(crate) fn pattern_reports(
    name: &str,
    model: &dyn Model,
    data: &AggregatedDataset,
) -> Result<Vec<PatternReport>> {
    data.entries()
        .iter()
        .map(|e| {
            Ok(PatternReport {
                model: name.to_string(),
                pattern: e.pattern.clone(),
                label_mean: e.label_mean(),
                prob_positive: model.predict(&e.input).context("predicting pattern")?,
            })
        })
        .collect()
}
