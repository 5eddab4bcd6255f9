use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::new_table;
use crate::config::{require, ExperimentConfig, Units};
use crate::error::{CliError, CliResult};
use crate::table::ResultTable;
use qrouter::dynamics::{evolve_lindblad, evolve_unitary, linspace, DephasingConvention, NoiseModel, TimeGrid};
use qrouter::fidelity::{
    average_process_fidelity, haar_monte_carlo_fidelity, two_output_channel, two_output_map, two_output_routing_table,
    two_output_subspace, Integrator, RouteOutcome, RoutingTable,
};
use qrouter::linalg::golden_section_max;
use qrouter::router::{
    ideal_transfer_unitary, two_output_hamiltonian, two_output_register, TwoOutputParams, CONTROL, INPUT, OUTPUT1,
    OUTPUT2,
};
use qrouter::{basis_state, StateVector, C64};

/// Relaxation and coherence times applied to every qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub t1: f64,
    pub t2: f64,
    #[serde(default)]
    pub dephasing: DephasingConvention,
}

impl NoiseConfig {
    fn model(&self, units: &Units) -> CliResult<NoiseModel> {
        Ok(NoiseModel::uniform(units.time(self.t1), units.time(self.t2))?.with_convention(self.dephasing)?)
    }
}

fn default_noise() -> Option<NoiseConfig> {
    Some(NoiseConfig {
        t1: 30.0,
        t2: 30.0,
        dephasing: DephasingConvention::default(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepRatioConfig {
    pub jz: f64,
    pub t1: f64,
    pub t2: f64,
    pub dephasing: DephasingConvention,
    pub ratio_start: f64,
    pub ratio_stop: f64,
    pub ratio_step: f64,
    /// Golden-section refinement of the noisy maximum between the grid
    /// neighbours of the best grid point.
    pub refine: bool,
}

impl Default for SweepRatioConfig {
    fn default() -> Self {
        Self {
            jz: 10.0,
            t1: 30.0,
            t2: 30.0,
            dephasing: DephasingConvention::default(),
            ratio_start: 1.0,
            ratio_stop: 12.0,
            ratio_step: 0.1,
            refine: true,
        }
    }
}

impl SweepRatioConfig {
    /// `start + k·step` for `k = 0..n`, with `stop` on the grid.
    pub fn grid(&self) -> CliResult<Vec<f64>> {
        let (a, b, h) = (self.ratio_start, self.ratio_stop, self.ratio_step);
        require(
            a > 0.0 && b >= a && h > 0.0 && [a, b, h].iter().all(|v| v.is_finite()),
            format!("invalid ratio grid start={a} stop={b} step={h}"),
        )?;
        let n = ((b - a) / h).round();
        require(
            (a + n * h - b).abs() <= 1e-9 * h.max(b),
            format!("ratio_stop {b} is not on the grid {a} + k·{h}"),
        )?;
        require(n < 1e5, "ratio grid has too many points")?;
        Ok((0..=n as usize).map(|k| a + k as f64 * h).collect())
    }
}

fn fbar(jz: f64, ratio: f64, noise: Option<&NoiseModel>) -> qrouter::Result<f64> {
    let p = TwoOutputParams::from_ratio(jz, ratio)?;
    qrouter::fidelity::two_output_fidelity(&p, noise)
}

pub fn run_sweep_ratio(config: &ExperimentConfig) -> CliResult<ResultTable> {
    let cfg: SweepRatioConfig = config.params()?;
    let u = config.units;
    let jz = u.frequency(cfg.jz);
    let noise = NoiseModel::uniform(u.time(cfg.t1), u.time(cfg.t2))?.with_convention(cfg.dephasing)?;
    let grid = cfg.grid()?;
    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&r| -> qrouter::Result<_> {
            let p = TwoOutputParams::from_ratio(jz, r)?;
            Ok((fbar(jz, r, None)?, fbar(jz, r, Some(&noise))?, p.transfer_time()))
        })
        .collect::<qrouter::Result<_>>()?;

    let mut table = new_table(config, &cfg)?;
    table.push_float("ratio", grid.clone())?;
    table.push_float("fbar_noiseless", rows.iter().map(|r| r.0).collect())?;
    table.push_float("fbar_noisy", rows.iter().map(|r| r.1).collect())?;
    table.push_float("transfer_time_us", rows.iter().map(|r| r.2).collect())?;

    let (k, best) = rows
        .iter()
        .map(|r| r.1)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    table.summarize("grid_argmax_ratio", grid[k])?;
    table.summarize("grid_max_fbar_noisy", best)?;
    let (mut arg, mut max) = (grid[k], best);
    if cfg.refine && grid.len() > 1 {
        let lo = grid[k.saturating_sub(1)];
        let hi = grid[(k + 1).min(grid.len() - 1)];
        let mut failure = None;
        let r = golden_section_max(
            |r| match fbar(jz, r, Some(&noise)) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            lo,
            hi,
            1e-4,
        );
        if let Some(e) = failure {
            return Err(e.into());
        }
        let v = fbar(jz, r, Some(&noise))?;
        if v > max {
            (arg, max) = (r, v);
        }
    }
    table.summarize("argmax_ratio", arg)?;
    table.summarize("max_fbar_noisy", max)?;
    for w in TwoOutputParams::from_ratio(jz, grid[0])?.warnings() {
        table.warn(format!("ratio {}: {w}", grid[0]));
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransferConfig {
    pub jz: f64,
    pub ratios: Vec<f64>,
    /// `"0"`, `"1"` or `"+"`.
    pub control: String,
    /// `"0"`, `"1"` or `"+"`.
    pub input: String,
    /// Output times per ratio, uniformly over `[0, T]`.
    pub samples: usize,
    /// `null` for unitary evolution.
    pub noise: Option<NoiseConfig>,
}

impl Default for TransferConfig {
    fn default() -> Self {
        Self {
            jz: 10.0,
            ratios: vec![1.0, 3.0, 5.0],
            control: "0".into(),
            input: "1".into(),
            samples: 201,
            noise: None,
        }
    }
}

fn qubit_amplitudes(name: &str, spec: &str) -> CliResult<[f64; 2]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match spec {
        "0" => Ok([1.0, 0.0]),
        "1" => Ok([0.0, 1.0]),
        "+" => Ok([h, h]),
        other => Err(CliError::Config(format!("{name} must be \"0\", \"1\" or \"+\", got {other:?}"))),
    }
}

/// Product state `input ⊗ |00⟩ ⊗ control` on the two-output register.
fn transfer_initial_state(input: &str, control: &str) -> CliResult<StateVector> {
    let a = qubit_amplitudes("input", input)?;
    let c = qubit_amplitudes("control", control)?;
    let reg = two_output_register();
    let states: Vec<(C64, StateVector)> = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .filter(|&(i, j)| a[i] * c[j] != 0.0)
        .map(|(i, j)| Ok((C64::new(a[i] * c[j], 0.0), basis_state(&reg, &format!("{i}00{j}"))?)))
        .collect::<qrouter::Result<_>>()?;
    let terms: Vec<(C64, &StateVector)> = states.iter().map(|(w, s)| (*w, s)).collect();
    Ok(StateVector::superpose(&terms)?)
}

pub fn run_transfer(config: &ExperimentConfig) -> CliResult<ResultTable> {
    let cfg: TransferConfig = config.params()?;
    require(!cfg.ratios.is_empty(), "ratios must not be empty")?;
    require(cfg.samples >= 2, "samples must be at least 2")?;
    let u = config.units;
    let jz = u.frequency(cfg.jz);
    let psi0 = transfer_initial_state(&cfg.input, &cfg.control)?;
    let noise = cfg.noise.map(|n| n.model(&u)).transpose()?;
    let labels = [INPUT, OUTPUT1, OUTPUT2, CONTROL];

    let series: Vec<(f64, Vec<f64>, Vec<Vec<f64>>)> = cfg
        .ratios
        .par_iter()
        .map(|&r| -> qrouter::Result<_> {
            let p = TwoOutputParams::from_ratio(jz, r)?;
            let h = two_output_hamiltonian(&p)?;
            let t = p.transfer_time();
            let (times, pops) = match &noise {
                None => {
                    let res = evolve_unitary(&h, &psi0, &linspace(t, cfg.samples))?;
                    let pops = labels.iter().map(|l| res.population(l)).collect::<qrouter::Result<_>>()?;
                    (res.times, pops)
                }
                Some(n) => {
                    let grid = TimeGrid::for_hamiltonian(&h, t, cfg.samples)?;
                    let res = evolve_lindblad(&h, &psi0.to_density(), Some(n), &grid)?;
                    let pops = labels.iter().map(|l| res.population(l)).collect::<qrouter::Result<_>>()?;
                    (res.times, pops)
                }
            };
            Ok((r, times, pops))
        })
        .collect::<qrouter::Result<_>>()?;

    let mut table = new_table(config, &cfg)?;
    let mut ratio_col = Vec::new();
    let mut t_col = Vec::new();
    let mut pop_cols = vec![Vec::new(); labels.len()];
    let mut finals = serde_json::Map::new();
    for (r, times, pops) in &series {
        ratio_col.extend(std::iter::repeat_n(*r, times.len()));
        t_col.extend_from_slice(times);
        let mut fin = serde_json::Map::new();
        for (q, col) in pop_cols.iter_mut().enumerate() {
            col.extend_from_slice(&pops[q]);
            fin.insert(labels[q].into(), (*pops[q].last().expect("samples >= 2")).into());
        }
        finals.insert(r.to_string(), fin.into());
    }
    table.push_float("ratio", ratio_col)?;
    table.push_float("t_us", t_col)?;
    for (label, col) in labels.iter().zip(pop_cols) {
        table.push_float(*label, col)?;
    }
    table.summarize("final_populations", finals)?;
    for &r in &cfg.ratios {
        for w in TwoOutputParams::from_ratio(jz, r)?.warnings() {
            table.warn(format!("ratio {r}: {w}"));
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RouteTableConfig {
    pub jz: f64,
    pub ratio: f64,
    /// Readout time; `null` for the transfer time.
    pub t: Option<f64>,
}

impl Default for RouteTableConfig {
    fn default() -> Self {
        Self {
            jz: 10.0,
            ratio: 5.0,
            t: None,
        }
    }
}

pub(crate) fn outcome_columns(outcome: &RouteOutcome) -> (String, String) {
    match outcome {
        RouteOutcome::Routed(d) => ("routed".into(), d.join(";")),
        RouteOutcome::Retained => ("retained".into(), String::new()),
        RouteOutcome::Ambiguous => ("ambiguous".into(), String::new()),
    }
}

/// Columns `control, outcome, destinations, t_us, input, <outputs…>`,
/// with `prefix` columns prepended per row.
pub(crate) fn push_routing_rows(
    table: &mut ResultTable,
    tables: &[(Vec<(String, String)>, RoutingTable)],
    outputs: &[&str],
) -> CliResult<()> {
    let mut prefix_cols: Vec<(String, Vec<String>)> = Vec::new();
    let (mut control, mut outcome, mut dest, mut t) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut input = Vec::new();
    let mut outs = vec![Vec::new(); outputs.len()];
    for (prefix, rt) in tables {
        for row in &rt.rows {
            for (k, (name, value)) in prefix.iter().enumerate() {
                if prefix_cols.len() <= k {
                    prefix_cols.push((name.clone(), Vec::new()));
                }
                prefix_cols[k].1.push(value.clone());
            }
            let (o, d) = outcome_columns(&row.outcome);
            control.push(row.control.clone());
            outcome.push(o);
            dest.push(d);
            t.push(row.transfer_time);
            input.push(row.input_population);
            for (k, label) in outputs.iter().enumerate() {
                let p = row
                    .output_populations
                    .iter()
                    .find(|(l, _)| l == label)
                    .map_or(0.0, |(_, p)| *p);
                outs[k].push(p);
            }
        }
    }
    for (name, col) in prefix_cols {
        table.push_text(name, col)?;
    }
    table.push_text("control", control)?;
    table.push_text("outcome", outcome)?;
    table.push_text("destinations", dest)?;
    table.push_float("t_us", t)?;
    table.push_float(INPUT, input)?;
    for (label, col) in outputs.iter().zip(outs) {
        table.push_float(*label, col)?;
    }
    Ok(())
}

pub fn run_route_table(config: &ExperimentConfig) -> CliResult<ResultTable> {
    let cfg: RouteTableConfig = config.params()?;
    let u = config.units;
    let p = TwoOutputParams::from_ratio(u.frequency(cfg.jz), cfg.ratio)?;
    let rt = two_output_routing_table(&p, cfg.t.map(|t| u.time(t)))?;
    let mut table = new_table(config, &cfg)?;
    push_routing_rows(&mut table, &[(Vec::new(), rt.clone())], &[OUTPUT1, OUTPUT2])?;
    table.summarize("table", &rt)?;
    for w in p.warnings() {
        table.warn(w);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FidelityPointConfig {
    pub jz: f64,
    pub ratio: f64,
    /// `null` for the noiseless channel.
    pub noise: Option<NoiseConfig>,
    pub integrator: Integrator,
    /// Haar Monte-Carlo samples drawn with the configuration seed; 0
    /// skips the estimate.
    pub haar_samples: usize,
}

impl Default for FidelityPointConfig {
    fn default() -> Self {
        Self {
            jz: 10.0,
            ratio: 4.192,
            noise: default_noise(),
            integrator: Integrator::default(),
            haar_samples: 0,
        }
    }
}

pub fn run_fidelity_point(config: &ExperimentConfig) -> CliResult<ResultTable> {
    let cfg: FidelityPointConfig = config.params()?;
    let u = config.units;
    let p = TwoOutputParams::from_ratio(u.frequency(cfg.jz), cfg.ratio)?;
    let noise = cfg.noise.map(|n| n.model(&u)).transpose()?;
    let target = ideal_transfer_unitary();
    let channel = two_output_channel(&p, noise.as_ref(), cfg.integrator)?;
    let f = average_process_fidelity(&channel, &target)?;

    let mut table = new_table(config, &cfg)?;
    table.push_float("ratio", vec![cfg.ratio])?;
    table.push_float("transfer_time_us", vec![p.transfer_time()])?;
    table.push_float("fbar", vec![f])?;
    if cfg.haar_samples > 0 {
        let map = two_output_map(&p, noise.as_ref(), p.transfer_time(), cfg.integrator)?;
        let mc = haar_monte_carlo_fidelity(&map, &target, &two_output_subspace(), cfg.haar_samples, config.seed)?;
        table.push_float("haar_mean", vec![mc.mean])?;
        table.push_float("haar_stderr", vec![mc.stderr])?;
        table.push_float("haar_samples", vec![mc.samples as f64])?;
        table.summarize("haar", mc)?;
    }
    table.summarize("channel", &channel.metadata)?;
    for w in p.warnings() {
        table.warn(w);
    }
    Ok(table)
}
