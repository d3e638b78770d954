use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use qperceptron_cli::output::write_outputs;
use qperceptron_cli::{ExperimentConfig, ExperimentError, ExperimentRegistry, GradientChoice};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Gradient {
    Fd,
    Analytic,
}

/// Runs one experiment and writes its CSV/JSON artifacts. `list` prints the
/// available experiments.
#[derive(Debug, Parser)]
#[command(name = "qperceptron", version)]
struct Args {
    /// Experiment name, or `list`.
    experiment: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory [default: results/<experiment>].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Highest label-noise percentage of the teacher-student sweep.
    #[arg(long)]
    noise_max: Option<u32>,
    #[arg(long)]
    grid_res: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Convergence threshold on the per-iteration loss change.
    #[arg(long)]
    loss_delta: Option<f64>,
    #[arg(long)]
    flip_fraction: Option<f64>,
    #[arg(long)]
    copies: Option<usize>,
    /// Entangled-model restarts before giving up.
    #[arg(long)]
    max_attempts: Option<usize>,
    /// Gradient of the entangled model.
    #[arg(long, value_enum)]
    gradient: Option<Gradient>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Train without the constant bias input.
    #[arg(long)]
    no_bias: bool,
    /// Also write per-iteration training losses.
    #[arg(long)]
    record_trajectory: bool,
}

impl Args {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        cfg.seed = self.seed;
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field { $target = v; })*
            };
        }
        set!(
            repeats => cfg.repeats,
            noise_max => cfg.noise_max_pct,
            grid_res => cfg.grid_res,
            learning_rate => cfg.train.learning_rate,
            threshold => cfg.threshold,
            max_iterations => cfg.train.max_iterations,
            loss_delta => cfg.train.loss_delta_threshold,
            flip_fraction => cfg.flip_fraction,
            copies => cfg.copies,
            max_attempts => cfg.max_attempts,
            jobs => cfg.jobs,
        );
        if let Some(g) = self.gradient {
            cfg.gradient = match g {
                Gradient::Fd => GradientChoice::FiniteDifference,
                Gradient::Analytic => GradientChoice::Analytic,
            };
        }
        if self.no_bias {
            cfg.bias = false;
        }
        cfg.train.record_trajectory |= self.record_trajectory;
    }
}

fn run(args: &Args) -> Result<(), ExperimentError> {
    let registry = ExperimentRegistry::default();
    if args.experiment == "list" {
        for e in registry.iter() {
            println!("{:<16} {}", e.name(), e.description());
        }
        return Ok(());
    }
    let experiment = registry.get(&args.experiment)?;
    let mut cfg = experiment.default_config();
    args.apply(&mut cfg);
    cfg.validate()?;

    let result = experiment.run(&cfg)?;
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("results").join(&args.experiment));
    let written = write_outputs(&result, &dir)?;

    for (key, value) in &result.metrics {
        println!("{key:<28} {value:.6}");
    }
    println!("converged                    {}", result.converged);
    println!(
        "elapsed                      {:.2}s",
        result.metadata.elapsed_secs
    );
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
