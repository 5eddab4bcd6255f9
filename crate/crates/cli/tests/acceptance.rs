//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs with a custom `main` so the report is printed even when output is
//! captured. A criterion fails the run unless every failing check is listed
//! in `KNOWN_DEVIATIONS`; such checks are still reported as FAIL.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;

use qrouter::circuit::{numeric_couplings_with_convergence, CircuitParams, DEFAULT_LEVELS};
use qrouter::dynamics::{evolve_lindblad, NoiseModel, TimeGrid, UnitaryPropagator};
use qrouter::fidelity::{
    average_process_fidelity, channel_tomography, frame_alignment, haar_monte_carlo_fidelity, two_output_fidelity,
    two_output_map, two_output_subspace, Integrator,
};
use qrouter::router::{
    ideal_transfer_unitary, rwa_effective_hamiltonian, two_output_hamiltonian, TwoOutputParams,
};
use qrouter::units::{mhz_to_rad_per_us, rad_per_us_to_mhz};
use qrouter::{basis_state, pauli, Axis, DensityMatrix, Operator, QubitRegister, StateVector, C64};
use qrouter_cli::{execute, run, Experiment, ExperimentConfig, ResultTable};
use serde_json::{json, Value};

/// Checks that are expected to fail; see the project decisions log.
const KNOWN_DEVIATIONS: &[(&str, &str)] = &[("7", "J^z within 5%")];

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Report {
    checks: Vec<Check>,
}

impl Report {
    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }
}

type Outcome = Result<Report, String>;

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn jz() -> f64 {
    mhz_to_rad_per_us(10.0)
}

fn config(experiment: Experiment, params: Value, seed: u64) -> ExperimentConfig {
    let mut c = ExperimentConfig::defaults(experiment);
    c.params = params;
    c.seed = seed;
    c
}

fn run_table(experiment: Experiment, params: Value) -> Result<ResultTable, String> {
    run(&config(experiment, params, 0)).map_err(|e| e.to_string())
}

fn summary_f64(t: &ResultTable, key: &str) -> Result<f64, String> {
    t.metadata
        .summary
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| format!("summary has no numeric {key}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sweep_optimum() -> Outcome {
    let t = run_table(Experiment::SweepRatio, json!({}))?;
    let fmax = summary_f64(&t, "max_fbar_noisy")?;
    let rmax = summary_f64(&t, "argmax_ratio")?;
    let mut r = Report::default();
    r.check("max noisy F within 0.9907 ± 0.002", (fmax - 0.9907).abs() <= 0.002, format!("{fmax:.5}"));
    r.check("argmax ratio within 4.192 ± 0.15", (rmax - 4.192).abs() <= 0.15, format!("{rmax:.4}"));
    Ok(r)
}

fn noiseless_limit() -> Outcome {
    let f = |ratio: f64| -> Result<f64, String> {
        two_output_fidelity(&TwoOutputParams::from_ratio(jz(), ratio).map_err(err)?, None).map_err(err)
    };
    let mut r = Report::default();
    let f20 = f(20.0)?;
    r.check("F at ratio 20 >= 0.999", f20 >= 0.999, format!("{f20:.6}"));
    let series: Vec<f64> = [2.0, 4.0, 8.0, 16.0, 32.0].iter().map(|&x| f(x)).collect::<Result<_, _>>()?;
    let monotone = series.windows(2).all(|w| w[1] >= w[0]);
    let shown: Vec<String> = series.iter().map(|v| format!("{v:.6}")).collect();
    r.check("monotone over {2,4,8,16,32}", monotone, shown.join(" "));
    Ok(r)
}

fn oracle_equivalence() -> Outcome {
    let noise = NoiseModel::uniform(30.0, 30.0).map_err(err)?;
    let points: [(f64, Option<&NoiseModel>); 6] = [
        (2.0, Some(&noise)),
        (4.192, Some(&noise)),
        (8.0, Some(&noise)),
        (1.5, None),
        (4.192, None),
        (12.0, None),
    ];
    let target = ideal_transfer_unitary();
    let basis = two_output_subspace();
    let mut r = Report::default();
    for (k, (ratio, n)) in points.into_iter().enumerate() {
        let p = TwoOutputParams::from_ratio(jz(), ratio).map_err(err)?;
        let map = two_output_map(&p, n, p.transfer_time(), Integrator::Rk4).map_err(err)?;
        let closed = average_process_fidelity(&channel_tomography(&map, &basis).map_err(err)?, &target).map_err(err)?;
        let mc = haar_monte_carlo_fidelity(&map, &target, &basis, 10_000, 100 + k as u64).map_err(err)?;
        let z = (closed - mc.mean).abs() / mc.stderr;
        r.check(
            &format!("ratio {ratio} {}", if n.is_some() { "noisy" } else { "noiseless" }),
            z <= 3.0,
            format!("closed {closed:.6} haar {:.6} ({z:.2} se)", mc.mean),
        );
    }
    Ok(r)
}

fn rwa_check() -> Outcome {
    let mut r = Report::default();
    for ratio in [20.0, 40.0] {
        let p = TwoOutputParams::from_ratio(jz(), ratio).map_err(err)?;
        let h = two_output_hamiltonian(&p).map_err(err)?;
        let heff = rwa_effective_hamiltonian(&p).map_err(err)?;
        let t = p.transfer_time();
        let full = UnitaryPropagator::new(&h).map_err(err)?;
        let eff = UnitaryPropagator::new(&heff).map_err(err)?;
        let reg = h.register().clone();
        for control in ['0', '1'] {
            let a = basis_state(&reg, &format!("000{control}")).map_err(err)?;
            let b = basis_state(&reg, &format!("100{control}")).map_err(err)?;
            let s = C64::new(FRAC_1_SQRT_2, 0.0);
            let psi = StateVector::superpose(&[(s, &a), (s, &b)]).map_err(err)?;
            let lab = full.apply(t, &psi).map_err(err)?;
            let aligned = StateVector::new(reg.clone(), frame_alignment(&h, t) * lab.amplitudes()).map_err(err)?;
            let f = aligned.fidelity(&eff.apply(t, &psi).map_err(err)?).map_err(err)?;
            r.check(&format!("ratio {ratio} control {control}"), f >= 0.995, format!("{f:.6}"));
        }
    }
    Ok(r)
}

fn ideal_unitary_contract() -> Outcome {
    let u = ideal_transfer_unitary();
    let reg = u.register().clone();
    let mut r = Report::default();
    let e = u.unitarity_error();
    r.check("unitary within 1e-10", e <= 1e-10, format!("{e:.2e}"));

    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let input = StateVector::superpose(&[
        (s, &basis_state(&reg, "1000").map_err(err)?),
        (s, &basis_state(&reg, "1001").map_err(err)?),
    ])
    .map_err(err)?;
    let m = C64::new(0.0, -FRAC_1_SQRT_2);
    let entangled = StateVector::superpose(&[
        (m, &basis_state(&reg, "0100").map_err(err)?),
        (m, &basis_state(&reg, "0011").map_err(err)?),
    ])
    .map_err(err)?;
    let f = u.apply(&input).map_err(err)?.fidelity(&entangled).map_err(err)?;
    r.check("entangled output fidelity >= 1 - 1e-9", f >= 1.0 - 1e-9, format!("1 - {:.2e}", 1.0 - f));

    let zero = StateVector::superpose(&[
        (s, &basis_state(&reg, "0000").map_err(err)?),
        (C64::new(0.0, FRAC_1_SQRT_2), &basis_state(&reg, "0001").map_err(err)?),
    ])
    .map_err(err)?;
    let out = u.apply(&zero).map_err(err)?;
    let dev = (out.amplitudes() - zero.amplitudes()).norm();
    r.check("zero-excitation sector fixed", dev <= 1e-12, format!("{dev:.2e}"));
    Ok(r)
}

fn lindblad_analytics() -> Outcome {
    let (t1, t2, t) = (30.0, 20.0, 30.0);
    let reg = QubitRegister::new(["q"]).map_err(err)?;
    let h: Operator = mhz_to_rad_per_us(0.5) * pauli(&reg, "q", Axis::Z).map_err(err)?;
    let noise = NoiseModel::uniform(t1, t2).map_err(err)?;
    let grid = TimeGrid::uniform(t, 1e-3, 2).map_err(err)?;
    let run = |bits: &[(f64, &str)]| -> Result<DensityMatrix, String> {
        let terms: Vec<(C64, StateVector)> = bits
            .iter()
            .map(|(a, b)| Ok((C64::new(*a, 0.0), basis_state(&reg, b).map_err(err)?)))
            .collect::<Result<_, String>>()?;
        let refs: Vec<(C64, &StateVector)> = terms.iter().map(|(a, s)| (*a, s)).collect();
        let psi = StateVector::superpose(&refs).map_err(err)?;
        let res = evolve_lindblad(&h, &psi.to_density(), Some(&noise), &grid).map_err(err)?;
        Ok(res.final_state().clone())
    };
    let mut r = Report::default();
    let excited = run(&[(1.0, "1")])?;
    let p1 = excited.populations()[0];
    let want = (-t / t1).exp();
    r.check("T1 population decay within 1e-4", (p1 - want).abs() <= 1e-4, format!("{p1:.6} vs {want:.6}"));
    let plus = run(&[(FRAC_1_SQRT_2, "0"), (FRAC_1_SQRT_2, "1")])?;
    let coh = plus.matrix()[(0, 1)].norm();
    let want = 0.5 * (-t / t2).exp();
    r.check("T2 coherence decay within 1e-4", (coh - want).abs() <= 1e-4, format!("{coh:.6} vs {want:.6}"));
    Ok(r)
}

fn circuit_numerics() -> Outcome {
    let p = CircuitParams::table_one();
    let (c, conv) = numeric_couplings_with_convergence(&p, DEFAULT_LEVELS).map_err(err)?;
    let jz = rad_per_us_to_mhz(c.jz[0]);
    let jx = rad_per_us_to_mhz(c.jx_in);
    let mut r = Report::default();
    let dz = (jz + 9.95).abs() / 9.95;
    r.check("J^z within 5%", dz <= 0.05, format!("{jz:.3} MHz ({:.1}% off)", 100.0 * dz));
    let dx = (jx - 2.78).abs() / 2.78;
    r.check("J^x within 5%", dx <= 0.05, format!("{jx:.3} MHz ({:.1}% off)", 100.0 * dx));
    let change = conv.max_coupling_change();
    r.check(
        "truncation change < 0.5% per level",
        change < 0.005,
        format!("{:.3}% at {DEFAULT_LEVELS} levels", 100.0 * change),
    );
    Ok(r)
}

fn concatenated_router() -> Outcome {
    let mut r = Report::default();
    for n in 1..=3 {
        for ratio in [5.0, 8.0] {
            let t = run_table(Experiment::Concat, json!({ "n": n, "ratio": ratio }))?;
            let worst = summary_f64(&t, "min_destination_population")?;
            r.check(&format!("N={n} ratio {ratio}"), worst >= 0.95, format!("min {worst:.4}"));
        }
    }
    Ok(r)
}

fn three_output_router() -> Outcome {
    let t = run_table(Experiment::ThreeOutput, json!({}))?;
    let resolved = t
        .metadata
        .summary
        .get("fully_resolved")
        .and_then(Value::as_object)
        .ok_or("summary has no fully_resolved")?;
    let mut r = Report::default();
    for mode in ["selective", "entangle"] {
        let ok = resolved.get(mode).and_then(Value::as_bool) == Some(true);
        r.check(&format!("{mode} table resolved"), ok, "");
    }
    let times = t
        .metadata
        .summary
        .get("pair_transfer_times")
        .and_then(Value::as_array)
        .ok_or("summary has no pair_transfer_times")?;
    r.check("entangle rows with a pair exist", !times.is_empty(), format!("{} rows", times.len()));
    for pt in times {
        let ratio = pt["ratio_to_t"].as_f64().ok_or("pair time without ratio_to_t")?;
        let dev = (ratio * SQRT_2 - 1.0).abs();
        r.check(
            &format!("T'/T for control {}", pt["control"]),
            dev <= 0.02,
            format!("{ratio:.5} ({:.3}% off 1/sqrt 2)", 100.0 * dev),
        );
    }
    Ok(r)
}

fn determinism() -> Outcome {
    let cases = [
        (Experiment::SweepRatio, json!({ "ratio_start": 3.0, "ratio_stop": 5.0, "ratio_step": 0.5 })),
        (Experiment::FidelityPoint, json!({ "haar_samples": 500 })),
        (Experiment::Transfer, json!({})),
        (Experiment::RouteTable, json!({})),
        (Experiment::Concat, json!({})),
        (Experiment::ThreeOutput, json!({})),
        (Experiment::CircuitDerive, json!({})),
        (Experiment::CircuitNumeric, json!({ "levels": 5 })),
    ];
    let dir = tempfile::tempdir().map_err(err)?;
    let mut r = Report::default();
    for (e, params) in cases {
        let mut written = Vec::new();
        let mut tables = Vec::new();
        for k in 0..2 {
            let mut cfg = config(e, params.clone(), 42);
            let path = dir.path().join(format!("{e}-{k}.csv"));
            cfg.output_path = Some(path.to_string_lossy().into_owned());
            let (table, csv, _) = execute(&cfg).map_err(err)?;
            written.push(std::fs::read(csv).map_err(err)?);
            tables.push(table);
        }
        let (a, b) = (&tables[0].metadata, &tables[1].metadata);
        let same_meta = a.summary == b.summary && a.warnings == b.warnings && a.seed == b.seed;
        r.check(
            &e.to_string(),
            written[0] == written[1] && same_meta,
            format!("{} bytes", written[0].len()),
        );
    }
    Ok(r)
}

fn known_deviation(id: &str, check: &str) -> bool {
    KNOWN_DEVIATIONS.iter().any(|(i, c)| *i == id && *c == check)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1", "noisy sweep optimum", sweep_optimum),
        ("2", "noiseless limit", noiseless_limit),
        ("3", "closed form vs Haar Monte Carlo", oracle_equivalence),
        ("4", "rotating-wave approximation", rwa_check),
        ("5", "ideal unitary contract", ideal_unitary_contract),
        ("6", "Lindblad T1/T2 analytics", lindblad_analytics),
        ("7", "circuit numerics", circuit_numerics),
        ("8", "concatenated router", concatenated_router),
        ("9", "three-output router", three_output_router),
        ("10", "determinism", determinism),
    ];
    let mut unexpected = 0;
    for (id, title, f) in criteria {
        match f() {
            Ok(report) => {
                let pass = report.checks.iter().all(|c| c.pass);
                println!("criterion {id} ({title}): {}", if pass { "PASS" } else { "FAIL" });
                for c in &report.checks {
                    let tag = match (c.pass, known_deviation(id, &c.name)) {
                        (true, _) => "ok",
                        (false, true) => "FAIL (known deviation)",
                        (false, false) => {
                            unexpected += 1;
                            "FAIL"
                        }
                    };
                    println!("    {tag:<22} {}: {}", c.name, c.detail);
                }
            }
            Err(e) => {
                unexpected += 1;
                println!("criterion {id} ({title}): FAIL");
                println!("    error: {e}");
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
