//! Artifact files written for every run.
//!
//! CSV files carry no timings, so identical configs and seeds reproduce them
//! byte for byte; `result.json` holds the metadata (seed, config hash) for
//! every file next to it.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use qperceptron_core::analysis::write_grid_csv;
use qperceptron_core::data::write_dataset_csv;
use qperceptron_core::training::write_trajectory_csv;

use crate::error::{Context, Result};
use crate::experiments::{DeltaMseRow, ExperimentResult, ModelRecord};

/// Model file contents: the record plus the seed and config hash it came from.
#[derive(Serialize)]
struct ModelFile<'a> {
    name: &'a str,
    seed: u64,
    config_hash: &'a str,
    #[serde(flatten)]
    record: &'a ModelRecord,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// `noise_pct,mean_delta_mse,std_delta_mse,n_repeats`, 9 significant digits.
pub fn write_delta_mse_csv<W: Write>(mut writer: W, rows: &[DeltaMseRow]) -> std::io::Result<()> {
    writeln!(writer, "noise_pct,mean_delta_mse,std_delta_mse,n_repeats")?;
    for r in rows {
        writeln!(
            writer,
            "{},{:.8e},{:.8e},{}",
            r.noise_pct, r.mean_delta_mse, r.std_delta_mse, r.n_repeats
        )?;
    }
    Ok(())
}

/// Writes every artifact of `result` into `dir` (created if missing) and
/// returns the paths written.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    for (name, grid) in &result.grids {
        let path = dir.join(format!("grid_{name}.csv"));
        let mut w = create(&path)?;
        write_grid_csv(&mut w, grid).context(format!("writing {}", path.display()))?;
        w.flush()?;
        written.push(path);
    }
    if !result.delta_mse.is_empty() {
        let path = dir.join("delta_mse.csv");
        let mut w = create(&path)?;
        write_delta_mse_csv(&mut w, &result.delta_mse)?;
        w.flush()?;
        written.push(path);
    }
    if !result.dataset.is_empty() {
        let path = dir.join("dataset.csv");
        write_dataset_csv(create(&path)?, &result.dataset)
            .context(format!("writing {}", path.display()))?;
        written.push(path);
    }
    for (name, trajectory) in &result.trajectories {
        let path = dir.join(format!("trajectory_{name}.csv"));
        let mut w = create(&path)?;
        write_trajectory_csv(&mut w, trajectory).context(format!("writing {}", path.display()))?;
        w.flush()?;
        written.push(path);
    }
    for (name, record) in &result.models {
        let path = dir.join(format!("model_{name}.json"));
        let file = ModelFile {
            name,
            seed: result.metadata.seed,
            config_hash: &result.metadata.config_hash,
            record,
        };
        let mut w = create(&path)?;
        serde_json::to_writer_pretty(&mut w, &file)?;
        writeln!(w)?;
        w.flush()?;
        written.push(path);
    }

    let path = dir.join("result.json");
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, result)?;
    writeln!(w)?;
    w.flush()?;
    written.push(path);
    Ok(written)
}
