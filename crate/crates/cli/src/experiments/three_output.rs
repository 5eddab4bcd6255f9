use serde::{Deserialize, Serialize};

use super::new_table;
use super::two_output::push_routing_rows;
use crate::config::{require, ExperimentConfig};
use crate::error::CliResult;
use crate::table::ResultTable;
use qrouter::fidelity::{locate_pair_transfer_time, three_output_routing_table, RouteOutcome};
use qrouter::router::{ThreeOutputMode, ThreeOutputParams, OUTPUT1, OUTPUT2, OUTPUT3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThreeOutputConfig {
    pub jz: f64,
    /// `|J^z/J^x|`.
    pub ratio: f64,
    pub modes: Vec<ThreeOutputMode>,
}

impl Default for ThreeOutputConfig {
    fn default() -> Self {
        Self {
            jz: 10.0,
            ratio: 10.0,
            modes: vec![ThreeOutputMode::Selective, ThreeOutputMode::Entangle],
        }
    }
}

fn mode_name(m: ThreeOutputMode) -> &'static str {
    match m {
        ThreeOutputMode::Selective => "selective",
        ThreeOutputMode::Entangle => "entangle",
    }
}

/// Pair transfer times located from the peak of the open-pair population,
/// for every row of an entangle-mode table that routes to two outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairTime {
    pub control: String,
    pub pair: [String; 2],
    pub t_us: f64,
    pub ratio_to_t: f64,
}

pub fn run_three_output(config: &ExperimentConfig) -> CliResult<ResultTable> {
    let cfg: ThreeOutputConfig = config.params()?;
    require(!cfg.modes.is_empty(), "modes must not be empty")?;
    require(cfg.ratio > 0.0 && cfg.ratio.is_finite(), "ratio must be positive")?;
    let u = config.units;
    let jz = u.frequency(cfg.jz);
    let jx = jz.abs() / cfg.ratio;

    let mut tables = Vec::new();
    let mut resolved = serde_json::Map::new();
    let mut pair_times = Vec::new();
    for &mode in &cfg.modes {
        let p = ThreeOutputParams::new(jz, jx, mode)?;
        let rt = three_output_routing_table(&p)?;
        let all_routed = rt.rows.iter().all(|r| r.outcome != RouteOutcome::Ambiguous);
        resolved.insert(mode_name(mode).into(), all_routed.into());
        if mode == ThreeOutputMode::Entangle {
            for row in &rt.rows {
                if let RouteOutcome::Routed(d) = &row.outcome {
                    if d.len() == 2 {
                        let t = locate_pair_transfer_time(&p, &row.control, [&d[0], &d[1]])?;
                        pair_times.push(PairTime {
                            control: row.control.clone(),
                            pair: [d[0].clone(), d[1].clone()],
                            t_us: t,
                            ratio_to_t: t / p.transfer_time(),
                        });
                    }
                }
            }
        }
        tables.push((vec![("mode".to_string(), mode_name(mode).to_string())], rt));
    }

    let mut table = new_table(config, &cfg)?;
    push_routing_rows(&mut table, &tables, &[OUTPUT1, OUTPUT2, OUTPUT3])?;
    table.summarize("fully_resolved", resolved)?;
    if !pair_times.is_empty() {
        let worst = pair_times
            .iter()
            .map(|p| (p.ratio_to_t * std::f64::consts::SQRT_2 - 1.0).abs())
            .fold(0.0, f64::max);
        table.summarize("pair_transfer_times", &pair_times)?;
        table.summarize("pair_time_max_relative_deviation", worst)?;
    }
    Ok(table)
}
