use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::new_table;
use crate::config::{require, ExperimentConfig};
use crate::error::CliResult;
use crate::table::ResultTable;
use qrouter::dynamics::{evolve_schedule, TimeGrid};
use qrouter::router::{
    bus_label, concat_register, concat_schedule, concat_static_hamiltonian, control_label, ConcatParams,
};
use qrouter::basis_state;

/// Largest number of stages simulated (`3N + 1` qubits).
pub const MAX_CONCAT_STAGES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConcatConfig {
    pub n: usize,
    pub jz: f64,
    /// `|J^z/J^x|`.
    pub ratio: f64,
    /// Step detuning; `null` for `2|J^z| + 20|J^x|`.
    pub delta: Option<f64>,
    /// Control bit strings (`control1` first); `null` for all `2^n`.
    pub controls: Option<Vec<String>>,
}

impl Default for ConcatConfig {
    fn default() -> Self {
        Self {
            n: 2,
            jz: 10.0,
            ratio: 5.0,
            delta: None,
            controls: None,
        }
    }
}

struct Run {
    controls: String,
    destination: String,
    times: Vec<f64>,
    populations: Vec<Vec<f64>>,
}

pub fn run_concat(config: &ExperimentConfig) -> CliResult<ResultTable> {
    let cfg: ConcatConfig = config.params()?;
    require(
        (1..=MAX_CONCAT_STAGES).contains(&cfg.n),
        format!("n must be in 1..={MAX_CONCAT_STAGES}, got {}", cfg.n),
    )?;
    require(cfg.ratio > 0.0 && cfg.ratio.is_finite(), "ratio must be positive")?;
    let u = config.units;
    let jz = u.frequency(cfg.jz);
    let jx = jz.abs() / cfg.ratio;
    let p = match cfg.delta {
        Some(d) => ConcatParams::new(cfg.n, jz, jx, u.frequency(d))?,
        None => ConcatParams::with_default_detuning(cfg.n, jz, jx)?,
    };
    let controls = match &cfg.controls {
        Some(c) => c.clone(),
        None => (0..1usize << cfg.n).map(|k| format!("{k:0w$b}", w = cfg.n)).collect(),
    };
    for c in &controls {
        require(
            c.len() == cfg.n && c.chars().all(|b| b == '0' || b == '1'),
            format!("control configuration {c:?} must be {} bits", cfg.n),
        )?;
    }

    let register = concat_register(cfg.n)?;
    let h = concat_static_hamiltonian(&p)?;
    let schedule = concat_schedule(&p)?;
    let step_times: Vec<f64> = (0..=cfg.n).map(|k| k as f64 * p.step_time).collect();
    let grid = TimeGrid::new(p.total_time(), p.step_time / 100.0, step_times)?;

    let runs: Vec<Run> = controls
        .par_iter()
        .map(|c| -> qrouter::Result<Run> {
            let bits: Vec<u8> = c.bytes().map(|b| b - b'0').collect();
            let mut state_bits = vec!['0'; register.len()];
            state_bits[register.index_of(&bus_label(0))?] = '1';
            for (i, b) in bits.iter().enumerate() {
                if *b == 1 {
                    state_bits[register.index_of(&control_label(i + 1))?] = '1';
                }
            }
            let psi0 = basis_state(&register, &state_bits.iter().collect::<String>())?;
            let res = evolve_schedule(&h, &schedule, &psi0, &grid)?;
            Ok(Run {
                controls: c.clone(),
                destination: p.destination(&bits)?,
                times: res.times.clone(),
                populations: res.populations.clone(),
            })
        })
        .collect::<qrouter::Result<_>>()?;

    let mut table = new_table(config, &cfg)?;
    let labels = register.labels();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); labels.len()];
    let (mut ctrl, mut step, mut t, mut dest, mut dest_pop) = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut finals = serde_json::Map::new();
    let mut worst = f64::INFINITY;
    for run in &runs {
        let d = register.index_of(&run.destination)?;
        for (k, (&time, pops)) in run.times.iter().zip(&run.populations).enumerate() {
            ctrl.push(run.controls.clone());
            step.push(k as f64);
            t.push(time);
            dest.push(run.destination.clone());
            dest_pop.push(pops[d]);
            for (q, col) in cols.iter_mut().enumerate() {
                col.push(pops[q]);
            }
        }
        let end = run.populations.last().expect("grid has samples")[d];
        worst = worst.min(end);
        finals.insert(
            run.controls.clone(),
            serde_json::json!({ "destination": run.destination, "population": end }),
        );
    }
    table.push_text("controls", ctrl)?;
    table.push_float("step", step)?;
    table.push_float("t_us", t)?;
    for (label, col) in labels.iter().zip(cols) {
        table.push_float(label.clone(), col)?;
    }
    table.push_text("destination", dest)?;
    table.push_float("destination_population", dest_pop)?;
    table.summarize("final", finals)?;
    table.summarize("min_destination_population", worst)?;
    table.summarize("delta_rad_per_us", p.delta)?;
    for w in p.warnings() {
        table.warn(w);
    }
    Ok(table)
}
