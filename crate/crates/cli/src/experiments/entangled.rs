//! Problems for the two-qubit entangled perceptron.

use num_complex::Complex64;

use qperceptron_core::analysis::{
    crossings_within_one_cell, entangled_quadric_residual, eval_grid, expectation_grid,
};
use qperceptron_core::data::{
    aggregate, derive_seed, gen_appendix_problems, gen_xor, AggregatedDataset, AppendixProblem,
    Sample,
};
use qperceptron_core::models::{accuracy, sample_mse, EntangledPerceptron, Model, ModelRegistry};
use qperceptron_core::training::TrainReport;

use super::{fit, pattern_reports, stream, timed, Experiment, ExperimentResult, ModelRecord};
use crate::config::ExperimentConfig;
use crate::error::{Context, ExperimentError, Result};

/// Common complex factor used to probe gauge invariance.
const GAUGE_PROBE: Complex64 = Complex64::new(0.4, -1.3);

/// Half-width of the `|E[y|x]|` band treated as the decision boundary.
const NEAR_BOUNDARY: f64 = 0.02;

pub struct XorExperiment;

impl Experiment for XorExperiment {
    fn name(&self) -> &str {
        "xor"
    }

    fn description(&self) -> &str {
        "noiseless XOR with the entangled perceptron, classical baseline"
    }

    fn run(&self, config: &ExperimentConfig) -> Result<ExperimentResult> {
        run_xor(config)
    }
}

pub struct AppendixExperiment {
    name: String,
    description: String,
    problem: AppendixProblem,
}

impl AppendixExperiment {
    pub fn new(name: &str, problem: AppendixProblem) -> Self {
        Self {
            name: name.to_string(),
            description: format!("entangled perceptron on the {} problem", problem.name()),
            problem,
        }
    }

    pub fn problem(&self) -> AppendixProblem {
        self.problem
    }
}

impl Experiment for AppendixExperiment {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        &self.description
    }

    fn run(&self, config: &ExperimentConfig) -> Result<ExperimentResult> {
        run_appendix(config, self.problem)
    }
}

struct Restarted {
    /// Attempts actually run.
    attempts: usize,
    model: Box<dyn Model>,
    report: TrainReport,
    reached_target: bool,
}

/// Trains from fresh seeded initialisations until the loss target is met or
/// the attempt budget runs out; keeps the lowest-loss run.
fn train_with_restarts(config: &ExperimentConfig, data: &AggregatedDataset) -> Result<Restarted> {
    let models = ModelRegistry::default();
    let mut best: Option<Restarted> = None;
    let mut used = 0;
    for attempt in 0..config.max_attempts {
        used += 1;
        let spec = config.model_spec(2, derive_seed(config.seed, stream::INIT, attempt as u64));
        let (model, report) = fit(&models, "entangled", &spec, data, &config.train)?;
        let reached = report.final_loss <= config.loss_target;
        if best
            .as_ref()
            .is_none_or(|b| report.final_loss < b.report.final_loss)
        {
            best = Some(Restarted {
                model,
                report,
                attempts: 0,
                reached_target: reached,
            });
        }
        if reached {
            break;
        }
    }
    let mut best = best.expect("at least one attempt");
    best.attempts = used;
    Ok(best)
}

/// Grid, accuracy and boundary diagnostics shared by every entangled run.
fn record_entangled(
    result: &mut ExperimentResult,
    config: &ExperimentConfig,
    samples: &[Sample],
    data: &AggregatedDataset,
    run: &Restarted,
) -> Result<()> {
    let model = run.model.as_ref();
    result.converged &= run.report.converged;
    result.set("loss", run.report.final_loss);
    result.set("iterations", run.report.iterations as f64);
    result.set("attempts", run.attempts as f64);
    result.set(
        "accuracy",
        accuracy(model, samples, config.threshold).context("accuracy")?,
    );
    result.set("mse", sample_mse(model, samples).context("MSE")?);
    result
        .models
        .insert("entangled".into(), ModelRecord::new(&run.report));
    result
        .patterns
        .extend(pattern_reports("entangled", model, data)?);
    if let Some(t) = &run.report.loss_trajectory {
        result.trajectories.insert("entangled".into(), t.clone());
    }

    let grid = expectation_grid(model, config.grid_range, config.grid_range, config.grid_res)
        .context("expectation grid")?;
    let concrete: EntangledPerceptron = run
        .report
        .final_weights
        .to_entangled()
        .context("entangled snapshot")?;
    let quadric = eval_grid(config.grid_range, config.grid_range, config.grid_res, |x| {
        entangled_quadric_residual(&concrete, x, 0.0)
    })
    .context("quadric residual grid")?;
    let agree = crossings_within_one_cell(&quadric.values, &grid.values);
    result.set("boundary_agreement", f64::from(u8::from(agree)));

    // |residual| / N on cells the grid places on the boundary.
    let mut near_max: f64 = 0.0;
    for (r, row) in grid.values.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            if e.abs() < NEAR_BOUNDARY {
                let x = [grid.x0[c], grid.x1[r]];
                let n: f64 = concrete
                    .amplitudes(&x)
                    .context("amplitudes")?
                    .iter()
                    .flatten()
                    .map(|h| h.norm_sqr())
                    .sum();
                near_max = near_max.max(quadric.values[r][c].abs() / n);
            }
        }
    }
    result.set("quadric_near_boundary_max", near_max);

    let rescaled = concrete.scaled(GAUGE_PROBE);
    let mut gauge: f64 = 0.0;
    for (r, &x1) in grid.x1.iter().enumerate() {
        for (c, &x0) in grid.x0.iter().enumerate() {
            let e = 2.0 * rescaled.predict(&[x0, x1]).context("rescaled prediction")? - 1.0;
            gauge = gauge.max((e - grid.values[r][c]).abs());
        }
    }
    result.set("gauge_max_deviation", gauge);
    result.grids.insert("entangled".into(), grid);
    Ok(())
}

fn non_convergence(config: &ExperimentConfig, run: &Restarted) -> ExperimentError {
    ExperimentError::NonConvergence {
        experiment: config.experiment.clone(),
        attempts: run.attempts,
        target: config.loss_target,
        best_loss: run.report.final_loss,
    }
}

pub fn run_xor(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let (mut result, elapsed) = timed(|| {
        let mut result = ExperimentResult::new(config);
        let samples = gen_xor(config.copies).context("generating dataset")?;
        let data = aggregate(&samples).context("aggregating dataset")?;
        let run = train_with_restarts(config, &data)?;
        if !run.reached_target {
            return Err(non_convergence(config, &run));
        }
        record_entangled(&mut result, config, &samples, &data, &run)?;

        let models = ModelRegistry::default();
        let spec = config.model_spec(2, 0);
        let (classical, report) = fit(&models, "classical", &spec, &data, &config.train)?;
        result.set(
            "classical_accuracy",
            accuracy(classical.as_ref(), &samples, config.threshold)
                .context("classical accuracy")?,
        );
        result.set(
            "classical_mse",
            sample_mse(classical.as_ref(), &samples).context("classical MSE")?,
        );
        result.grids.insert(
            "classical".into(),
            expectation_grid(
                classical.as_ref(),
                config.grid_range,
                config.grid_range,
                config.grid_res,
            )
            .context("classical grid")?,
        );
        result
            .patterns
            .extend(pattern_reports("classical", classical.as_ref(), &data)?);
        result
            .models
            .insert("classical".into(), ModelRecord::new(&report));
        result.dataset = samples;
        Ok(result)
    })?;
    result.metadata.elapsed_secs = elapsed;
    Ok(result)
}

/// Only the noiseless separable layouts have a reachable loss target; the
/// noisy and non-quadric problems report their best attempt.
fn enforces_target(problem: AppendixProblem) -> bool {
    matches!(
        problem,
        AppendixProblem::ParallelLines | AppendixProblem::Ellipse
    )
}

pub fn run_appendix(config: &ExperimentConfig, which: AppendixProblem) -> Result<ExperimentResult> {
    config.validate()?;
    let (mut result, elapsed) = timed(|| {
        let mut result = ExperimentResult::new(config);
        let samples = gen_appendix_problems(which, derive_seed(config.seed, stream::DATA, 0))
            .context("generating dataset")?;
        let data = aggregate(&samples).context("aggregating dataset")?;
        let run = train_with_restarts(config, &data)?;
        if enforces_target(which) && !run.reached_target {
            return Err(non_convergence(config, &run));
        }
        record_entangled(&mut result, config, &samples, &data, &run)?;
        result.note(format!("problem: {}", which.name()));
        if !enforces_target(which) {
            result.note("loss target not enforced for this problem; best of all attempts kept");
        }
        result.dataset = samples;
        Ok(result)
    })?;
    result.metadata.elapsed_secs = elapsed;
    Ok(result)
}
