use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use qrouter::units::mhz_to_rad_per_us;

/// Experiments understood by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SweepRatio,
    Transfer,
    RouteTable,
    Concat,
    ThreeOutput,
    CircuitDerive,
    CircuitNumeric,
    FidelityPoint,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::SweepRatio,
        Experiment::Transfer,
        Experiment::RouteTable,
        Experiment::Concat,
        Experiment::ThreeOutput,
        Experiment::CircuitDerive,
        Experiment::CircuitNumeric,
        Experiment::FidelityPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SweepRatio => "sweep-ratio",
            Experiment::Transfer => "transfer",
            Experiment::RouteTable => "route-table",
            Experiment::Concat => "concat",
            Experiment::ThreeOutput => "three-output",
            Experiment::CircuitDerive => "circuit-derive",
            Experiment::CircuitNumeric => "circuit-numeric",
            Experiment::FidelityPoint => "fidelity-point",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment {s:?}")))
    }
}

/// Unit of frequency-valued parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyUnit {
    /// `ω/2π` in MHz.
    #[serde(rename = "MHz")]
    Mhz,
    #[serde(rename = "rad/us")]
    RadPerUs,
}

/// Unit of time-valued parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeUnit {
    #[serde(rename = "us")]
    Us,
    #[serde(rename = "ns")]
    Ns,
}

/// Units of every physical quantity in `params`. Circuit files carry
/// their own units block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub frequency: FrequencyUnit,
    pub time: TimeUnit,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            frequency: FrequencyUnit::Mhz,
            time: TimeUnit::Us,
        }
    }
}

impl Units {
    /// Converts a frequency to rad/µs.
    pub fn frequency(&self, v: f64) -> f64 {
        match self.frequency {
            FrequencyUnit::Mhz => mhz_to_rad_per_us(v),
            FrequencyUnit::RadPerUs => v,
        }
    }

    /// Converts a time to µs.
    pub fn time(&self, v: f64) -> f64 {
        match self.time {
            TimeUnit::Us => v,
            TimeUnit::Ns => v * 1e-3,
        }
    }
}

/// Contents of a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub units: Units,
    #[serde(default = "empty_object")]
    pub params: serde_json::Value,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

impl ExperimentConfig {
    /// Default configuration of `experiment`: default units, default
    /// parameters, seed 0.
    pub fn defaults(experiment: Experiment) -> Self {
        Self {
            experiment,
            units: Units::default(),
            params: empty_object(),
            seed: 0,
            output_path: None,
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Parses `params` into the experiment's parameter type; missing keys
    /// take their defaults, unknown keys are rejected.
    pub fn params<P: DeserializeOwned>(&self) -> CliResult<P> {
        serde_json::from_value(self.params.clone())
            .map_err(|e| CliError::Config(format!("{} params: {e}", self.experiment)))
    }
}

/// Configuration error with `msg` unless `cond` holds.
pub fn require(cond: bool, msg: impl Into<String>) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Config(msg.into()))
    }
}
