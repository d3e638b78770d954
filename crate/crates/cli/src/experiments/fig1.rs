//! Four-corner problem with label noise: classical against single-qubit.

use qperceptron_core::analysis::{
    crossings_within_one_cell, eval_grid, expectation_grid, qubit_separation_residual,
};
use qperceptron_core::data::{aggregate, derive_seed, gen_noisy_2d, NOISY_2D_FLIP_PATTERNS};
use qperceptron_core::models::{mse, sample_mse, ModelRegistry};

use super::{fit, pattern_reports, stream, timed, Experiment, ExperimentResult, ModelRecord};
use crate::config::ExperimentConfig;
use crate::error::{Context, Result};

pub struct Fig1Experiment;

impl Experiment for Fig1Experiment {
    fn name(&self) -> &str {
        "fig1"
    }

    fn description(&self) -> &str {
        "noisy four-corner problem: classical vs single-qubit perceptron"
    }

    fn run(&self, config: &ExperimentConfig) -> Result<ExperimentResult> {
        run_fig1(config)
    }
}

pub fn run_fig1(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let (mut result, elapsed) = timed(|| {
        let mut result = ExperimentResult::new(config);
        let samples = gen_noisy_2d(
            config.copies,
            config.flip_fraction,
            &NOISY_2D_FLIP_PATTERNS,
            derive_seed(config.seed, stream::DATA, 0),
        )
        .context("generating dataset")?;
        let data = aggregate(&samples).context("aggregating dataset")?;
        let models = ModelRegistry::default();
        let spec = config.model_spec(2, derive_seed(config.seed, stream::INIT, 0));

        // The predictor that reproduces every pattern's empirical label
        // frequency bounds achievable training MSE from below.
        let ideal: Vec<f64> = samples
            .iter()
            .map(|s| data.find(s.x()).map_or(0.5, |e| e.prob_positive()))
            .collect();
        let labels: Vec<i8> = samples.iter().map(|s| s.y()).collect();
        result.set("mse_ideal", mse(&ideal, &labels).context("ideal MSE")?);

        for (label, model_name) in [("classical", "classical"), ("quantum", "qubit")] {
            let (model, report) = fit(&models, model_name, &spec, &data, &config.train)?;
            result.converged &= report.converged;
            result.set(
                &format!("mse_{label}"),
                sample_mse(model.as_ref(), &samples).context("MSE")?,
            );
            result.set(&format!("loss_{label}"), report.final_loss);
            result.set(&format!("iterations_{label}"), report.iterations as f64);
            result.grids.insert(
                label.to_string(),
                expectation_grid(
                    model.as_ref(),
                    config.grid_range,
                    config.grid_range,
                    config.grid_res,
                )
                .context("expectation grid")?,
            );
            result
                .patterns
                .extend(pattern_reports(label, model.as_ref(), &data)?);
            if let Some(t) = &report.loss_trajectory {
                result.trajectories.insert(label.to_string(), t.clone());
            }
            result
                .models
                .insert(label.to_string(), ModelRecord::new(&report));
        }

        let qubit = result.models["quantum"]
            .snapshot
            .to_qubit()
            .context("quantum snapshot")?;
        let norm = |w: &[f64]| w.iter().map(|v| v * v).sum::<f64>().sqrt();
        result.set("wx_norm", norm(qubit.wx()));
        result.set("wy_norm", norm(qubit.wy()));
        let hz = eval_grid(config.grid_range, config.grid_range, config.grid_res, |x| {
            qubit_separation_residual(&qubit, x)
        })
        .context("separation residual grid")?;
        let agree = crossings_within_one_cell(&hz.values, &result.grids["quantum"].values);
        result.set("boundary_agreement", f64::from(u8::from(agree)));

        result.dataset = samples;
        result.note("MSEs are computed on the full training data; this problem has no test split");
        Ok(result)
    })?;
    result.metadata.elapsed_secs = elapsed;
    Ok(result)
}
