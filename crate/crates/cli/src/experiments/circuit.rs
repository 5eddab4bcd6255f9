use serde::{Deserialize, Serialize};

use super::new_table;
use crate::config::{require, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::table::ResultTable;
use qrouter::circuit::{
    closed_form, numeric_couplings_with_convergence, CircuitFile, CircuitParams, DEFAULT_LEVELS, MIN_LEVELS,
};
use qrouter::units::rad_per_us_to_mhz;

/// Bundled parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircuitPreset {
    TableOne,
    ZeroCoupler,
}

impl CircuitPreset {
    pub fn params(self) -> CircuitParams {
        match self {
            CircuitPreset::TableOne => CircuitParams::table_one(),
            CircuitPreset::ZeroCoupler => CircuitParams::zero_coupler(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitPath {
    Derive,
    Numeric,
}

/// Either a preset or an inline circuit file (with its own units block).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitParamsConfig {
    pub preset: Option<CircuitPreset>,
    pub circuit: Option<CircuitFile>,
    /// Fock levels per mode of the numeric model.
    pub levels: usize,
}

impl Default for CircuitParamsConfig {
    fn default() -> Self {
        Self {
            preset: None,
            circuit: None,
            levels: DEFAULT_LEVELS,
        }
    }
}

impl CircuitParamsConfig {
    pub fn resolve(&self) -> CliResult<CircuitParams> {
        match (&self.preset, &self.circuit) {
            (Some(_), Some(_)) => Err(CliError::Config("give either preset or circuit, not both".into())),
            (Some(p), None) => Ok(p.params()),
            (None, Some(c)) => Ok(c.clone().into_params()?),
            (None, None) => Ok(CircuitPreset::TableOne.params()),
        }
    }
}

#[derive(Default)]
struct Rows {
    quantity: Vec<String>,
    source: Vec<String>,
    value: Vec<f64>,
    unit: Vec<String>,
}

impl Rows {
    fn add(&mut self, quantity: &str, source: &str, value: f64, unit: &str) {
        self.quantity.push(quantity.into());
        self.source.push(source.into());
        self.value.push(value);
        self.unit.push(unit.into());
    }

    /// Angular frequency in rad/µs, reported as `ω/2π` in MHz.
    fn freq(&mut self, quantity: &str, source: &str, w: f64) {
        self.add(quantity, source, rad_per_us_to_mhz(w), "MHz");
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn run_circuit(config: &ExperimentConfig, path: CircuitPath) -> CliResult<ResultTable> {
    let cfg: CircuitParamsConfig = config.params()?;
    require(cfg.levels >= MIN_LEVELS, format!("levels must be at least {MIN_LEVELS}"))?;
    let p = cfg.resolve()?;
    let (d, e) = closed_form(&p)?;
    let g = e.couplings;

    let mut rows = Rows::default();
    let cf = "closed-form";
    for (i, name) in ["1", "2", "c"].iter().enumerate() {
        rows.freq(&format!("e_j_tilde_{name}"), cf, d.e_j_tilde[i]);
        rows.freq(&format!("e_c_{name}"), cf, d.e_c_modes[i]);
        rows.add(&format!("zeta_{name}"), cf, d.zeta[i], "1");
        rows.freq(&format!("omega_{name}"), cf, d.omega[i]);
        rows.freq(&format!("alpha_{name}"), cf, d.alpha[i]);
    }
    rows.freq("omega_bar", cf, d.omega_bar);
    rows.freq("small_delta", cf, d.small_delta);
    rows.freq("big_delta", cf, d.big_delta);
    for i in 0..2 {
        let k = i + 1;
        rows.freq(&format!("g_z{k}"), cf, g.g_z[i]);
        rows.freq(&format!("g_x{k}"), cf, g.g_x[i]);
        rows.freq(&format!("g_xz{k}"), cf, g.g_xz[i]);
    }
    rows.freq("g_x12", cf, g.g_x12);
    rows.freq("delta_1", cf, e.delta_1);
    rows.freq("delta_2", cf, e.delta_2);
    rows.freq("delta_c", cf, e.delta_c);
    rows.freq("jz1", cf, e.jz[0]);
    rows.freq("jz2", cf, e.jz[1]);
    rows.freq("jx12", cf, e.jx12);
    rows.freq("jxz12", cf, e.jxz12);
    rows.freq("jx_in", cf, e.jx_in);

    let mut summary = serde_json::Map::new();
    summary.insert("jz_closed_mhz".into(), rad_per_us_to_mhz(e.jz[0]).into());
    summary.insert("jx_closed_mhz".into(), rad_per_us_to_mhz(e.jx_in).into());

    if path == CircuitPath::Numeric {
        let (c, conv) = numeric_couplings_with_convergence(&p, cfg.levels)?;
        let num = "numeric";
        rows.freq("jz1", num, c.jz[0]);
        rows.freq("jz2", num, c.jz[1]);
        rows.freq("jx_in", num, c.jx_in);
        rows.freq("freq_1", num, c.frequencies[0]);
        rows.freq("freq_2", num, c.frequencies[1]);
        rows.freq("freq_c", num, c.frequencies[2]);
        rows.freq("detuning_1", num, c.detunings[0]);
        rows.freq("detuning_2", num, c.detunings[1]);
        rows.freq("delta_c", num, c.delta_c);
        rows.add("min_overlap", num, c.min_overlap, "1");
        let cv = "convergence";
        rows.add("jz1_relative_change", cv, conv.jz_relative_change[0], "1");
        rows.add("jz2_relative_change", cv, conv.jz_relative_change[1], "1");
        rows.add("jx_in_relative_change", cv, conv.jx_relative_change, "1");
        rows.add("spectrum_shift", cv, conv.spectrum_shift, "1");
        let cmp = "comparison";
        rows.add("jz1_numeric_vs_closed_gap", cmp, relative_gap(c.jz[0], e.jz[0]), "1");
        rows.add("jx_in_numeric_vs_closed_gap", cmp, relative_gap(c.jx_in, e.jx_in), "1");
        summary.insert("jz_numeric_mhz".into(), rad_per_us_to_mhz(c.jz[0]).into());
        summary.insert("jx_numeric_mhz".into(), rad_per_us_to_mhz(c.jx_in).into());
        summary.insert("levels".into(), cfg.levels.into());
        summary.insert("max_coupling_change".into(), conv.max_coupling_change().into());
        summary.insert("convergence".into(), serde_json::to_value(conv)?);
    }

    let mut table = new_table(config, &cfg)?;
    table.summarize("circuit", CircuitFile::from_params(&p))?;
    table.push_text("quantity", rows.quantity)?;
    table.push_text("source", rows.source)?;
    table.push_float("value", rows.value)?;
    table.push_text("unit", rows.unit)?;
    for (k, v) in summary {
        table.summarize(k, v)?;
    }
    for w in p.warnings().into_iter().chain(e.warnings()) {
        table.warn(w);
    }
    Ok(table)
}
