//! Command-line experiments for the `qrouter` library.
//!
//! A run reads a JSON configuration (experiment, units block, parameters,
//! seed, output path), executes one experiment and writes a CSV series
//! plus a JSON metadata sidecar.

pub mod config;
pub mod error;
pub mod experiments;
pub mod table;

use std::path::{Path, PathBuf};

pub use config::{Experiment, ExperimentConfig, Units};
pub use error::{CliError, CliResult};
pub use experiments::run;
pub use table::{Column, ResultTable};

/// Loads the configuration for `experiment`: from `config_path` if given,
/// otherwise the defaults. `seed` and `out` override the file.
pub fn load_config(
    experiment: Experiment,
    config_path: Option<&Path>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> CliResult<ExperimentConfig> {
    let mut cfg = match config_path {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::defaults(experiment),
    };
    if cfg.experiment != experiment {
        return Err(CliError::Config(format!(
            "configuration is for {} but {experiment} was requested",
            cfg.experiment
        )));
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = out {
        cfg.output_path = Some(o.to_string_lossy().into_owned());
    }
    Ok(cfg)
}

/// Output CSV path: the configured one, or `<experiment>.csv`.
pub fn output_path(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_path
        .as_ref()
        .map_or_else(|| PathBuf::from(format!("{}.csv", cfg.experiment)), PathBuf::from)
}

/// Runs the experiment and writes its outputs; returns the CSV and
/// sidecar paths.
pub fn execute(cfg: &ExperimentConfig) -> CliResult<(ResultTable, PathBuf, PathBuf)> {
    let table = run(cfg)?;
    let csv = output_path(cfg);
    let meta = table.write(&csv)?;
    Ok((table, csv, meta))
}
