//! One runner per experiment. Every runner resolves its parameters
//! (defaults filled in), echoes them into the table metadata and returns a
//! [`ResultTable`] whose CSV depends only on the configuration and seed.

mod circuit;
mod concat;
mod three_output;
mod two_output;

pub use circuit::{run_circuit, CircuitParamsConfig, CircuitPath, CircuitPreset};
pub use concat::{run_concat, ConcatConfig, MAX_CONCAT_STAGES};
pub use three_output::{run_three_output, ThreeOutputConfig};
pub use two_output::{
    run_fidelity_point, run_route_table, run_sweep_ratio, run_transfer, FidelityPointConfig, NoiseConfig,
    RouteTableConfig, SweepRatioConfig, TransferConfig,
};

use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliResult;
use crate::table::ResultTable;

/// Runs the experiment named in `config`.
pub fn run(config: &ExperimentConfig) -> CliResult<ResultTable> {
    match config.experiment {
        Experiment::SweepRatio => run_sweep_ratio(config),
        Experiment::Transfer => run_transfer(config),
        Experiment::RouteTable => run_route_table(config),
        Experiment::Concat => run_concat(config),
        Experiment::ThreeOutput => run_three_output(config),
        Experiment::CircuitDerive => run_circuit(config, CircuitPath::Derive),
        Experiment::CircuitNumeric => run_circuit(config, CircuitPath::Numeric),
        Experiment::FidelityPoint => run_fidelity_point(config),
    }
}

/// Empty table whose metadata echoes `config` with `params` resolved.
pub(crate) fn new_table<P: Serialize>(config: &ExperimentConfig, params: &P) -> CliResult<ResultTable> {
    let echo = serde_json::json!({
        "experiment": config.experiment,
        "units": config.units,
        "params": serde_json::to_value(params)?,
        "seed": config.seed,
        "output_path": config.output_path,
    });
    Ok(ResultTable::new(config.experiment.name(), echo, config.seed))
}
