use crate::dynamics::UnitaryPropagator;
use crate::error::{Error, Result};
use crate::linalg::golden_section_max;
use crate::operator::Operator;
use crate::register::QubitRegister;
use crate::router::{
    three_output_hamiltonian, two_output_hamiltonian, ThreeOutputMode, ThreeOutputParams, TwoOutputParams,
    CONTROL, CONTROL1, CONTROL2, INPUT, OUTPUT1, OUTPUT2, OUTPUT3,
};
use crate::state::basis_state;

/// Result of one routing experiment.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "destinations")]
pub enum RouteOutcome {
    /// The excitation sits in these outputs.
    Routed(Vec<String>),
    /// The excitation stayed in the input.
    Retained,
    /// No clear destination.
    Ambiguous,
}

/// Classifies populations for a transfer meant to reach `fan_out` outputs
/// in equal shares: an output is selected when its population exceeds
/// `1/(2·fan_out)` (0.5 for a single destination), and the row is routed
/// only when exactly `fan_out` outputs are selected.
pub fn classify(input_population: f64, outputs: &[(String, f64)], fan_out: usize) -> RouteOutcome {
    let threshold = 0.5 / fan_out.max(1) as f64;
    let selected: Vec<String> = outputs
        .iter()
        .filter(|(_, p)| *p > threshold)
        .map(|(l, _)| l.clone())
        .collect();
    if selected.len() == fan_out {
        RouteOutcome::Routed(selected)
    } else if selected.is_empty() && input_population > 0.5 {
        RouteOutcome::Retained
    } else {
        RouteOutcome::Ambiguous
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RoutingRow {
    /// Control bits in register order.
    pub control: String,
    pub outcome: RouteOutcome,
    pub transfer_time: f64,
    pub input_population: f64,
    pub output_populations: Vec<(String, f64)>,
}

impl RoutingRow {
    /// Populations of the selected destinations.
    pub fn destination_populations(&self) -> Vec<f64> {
        match &self.outcome {
            RouteOutcome::Routed(dest) => self
                .output_populations
                .iter()
                .filter(|(l, _)| dest.contains(l))
                .map(|(_, p)| *p)
                .collect(),
            RouteOutcome::Retained => vec![self.input_population],
            RouteOutcome::Ambiguous => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RoutingTable {
    pub rows: Vec<RoutingRow>,
}

impl RoutingTable {
    pub fn row(&self, control: &str) -> Option<&RoutingRow> {
        self.rows.iter().find(|r| r.control == control)
    }
}

struct Router<'a> {
    register: &'a QubitRegister,
    propagator: UnitaryPropagator,
    outputs: &'a [&'a str],
    controls: &'a [&'a str],
}

impl Router<'_> {
    fn initial_bits(&self, control: &str) -> Result<String> {
        let bits: Vec<char> = control.chars().collect();
        if bits.len() != self.controls.len() {
            return Err(Error::Dimension {
                expected: self.controls.len(),
                found: bits.len(),
            });
        }
        Ok(self
            .register
            .labels()
            .iter()
            .map(|l| {
                if l == INPUT {
                    '1'
                } else if let Some(k) = self.controls.iter().position(|c| c == l) {
                    bits[k]
                } else {
                    '0'
                }
            })
            .collect())
    }

    fn populations(&self, control: &str, t: f64) -> Result<(f64, Vec<(String, f64)>)> {
        let psi0 = basis_state(self.register, &self.initial_bits(control)?)?;
        let pops = self.propagator.apply(t, &psi0)?.populations();
        let at = |l: &str| self.register.index_of(l).map(|q| pops[q]);
        let outputs = self
            .outputs
            .iter()
            .map(|l| Ok((l.to_string(), at(l)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok((at(INPUT)?, outputs))
    }

    /// First candidate `(time, fan_out)` that yields a definite outcome;
    /// the first candidate's row otherwise.
    fn row(&self, control: &str, candidates: &[(f64, usize)]) -> Result<RoutingRow> {
        let mut first: Option<RoutingRow> = None;
        for &(t, k) in candidates {
            let (input_population, output_populations) = self.populations(control, t)?;
            let row = RoutingRow {
                control: control.to_string(),
                outcome: classify(input_population, &output_populations, k),
                transfer_time: t,
                input_population,
                output_populations,
            };
            if row.outcome != RouteOutcome::Ambiguous {
                return Ok(row);
            }
            first.get_or_insert(row);
        }
        first.ok_or_else(|| Error::InvalidParameter("no candidate transfer time".into()))
    }
}

fn control_configurations(n: usize) -> Vec<String> {
    (0..1usize << n).map(|k| format!("{k:0n$b}")).collect()
}

/// Noiseless routing of an input excitation for both control states, read
/// out at `t` (default `T`).
pub fn two_output_routing_table(p: &TwoOutputParams, t: Option<f64>) -> Result<RoutingTable> {
    let h = two_output_hamiltonian(p)?;
    let router = Router {
        register: h.register(),
        propagator: UnitaryPropagator::new(&h)?,
        outputs: &[OUTPUT1, OUTPUT2],
        controls: &[CONTROL],
    };
    let t = t.unwrap_or_else(|| p.transfer_time());
    let rows = control_configurations(1)
        .iter()
        .map(|c| router.row(c, &[(t, 1)]))
        .collect::<Result<_>>()?;
    Ok(RoutingTable { rows })
}

/// Noiseless routing table of the three-output router over all four
/// control configurations (bits ordered `control1 control2`).
///
/// Selective mode reads single destinations at `T` and falls back to an
/// open pair at `T/√2`; entangle mode reads pairs at `T/√2` and falls back
/// to single destinations at `T`.
pub fn three_output_routing_table(p: &ThreeOutputParams) -> Result<RoutingTable> {
    let h = three_output_hamiltonian(p)?;
    let router = Router {
        register: h.register(),
        propagator: UnitaryPropagator::new(&h)?,
        outputs: &[OUTPUT1, OUTPUT2, OUTPUT3],
        controls: &[CONTROL1, CONTROL2],
    };
    let (t, tp) = (p.transfer_time(), p.pair_transfer_time());
    let candidates = match p.mode {
        ThreeOutputMode::Selective => [(t, 1), (tp, 2)],
        ThreeOutputMode::Entangle => [(tp, 2), (t, 1)],
    };
    let rows = control_configurations(2)
        .iter()
        .map(|c| router.row(c, &candidates))
        .collect::<Result<_>>()?;
    Ok(RoutingTable { rows })
}

/// Time in `(0, 1.5T]` at which the summed population of `pair` peaks for
/// the given control bits, refined by golden-section search.
pub fn locate_pair_transfer_time(p: &ThreeOutputParams, control: &str, pair: [&str; 2]) -> Result<f64> {
    let h: Operator = three_output_hamiltonian(p)?;
    let router = Router {
        register: h.register(),
        propagator: UnitaryPropagator::new(&h)?,
        outputs: &pair,
        controls: &[CONTROL1, CONTROL2],
    };
    let pair_pop = |t: f64| -> Result<f64> {
        let (_, outs) = router.populations(control, t)?;
        Ok(outs.iter().map(|(_, p)| p).sum())
    };
    let t_max = 1.5 * p.transfer_time();
    let n = 600;
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 1..=n {
        let t = t_max * k as f64 / n as f64;
        let v = pair_pop(t)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    let step = t_max / n as f64;
    let (a, b) = ((best.0 - step).max(0.0), (best.0 + step).min(t_max));
    Ok(golden_section_max(
        |t| pair_pop(t).unwrap_or(f64::NEG_INFINITY),
        a,
        b,
        1e-9 * p.transfer_time(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classification_rules() {
        let o = |a: f64, b: f64| vec![("o1".to_string(), a), ("o2".to_string(), b)];
        assert_eq!(classify(0.0, &o(0.9, 0.05), 1), RouteOutcome::Routed(vec!["o1".into()]));
        assert_eq!(classify(0.0, &o(0.5, 0.5), 1), RouteOutcome::Ambiguous);
        assert_eq!(classify(0.0, &o(0.49, 0.49), 2), RouteOutcome::Routed(vec!["o1".into(), "o2".into()]));
        assert_eq!(classify(0.95, &o(0.01, 0.01), 1), RouteOutcome::Retained);
    }

    #[test]
    fn two_output_routes_by_control() {
        let p = TwoOutputParams::from_ratio(2.0 * PI * 10.0, 5.0).unwrap();
        let table = two_output_routing_table(&p, None).unwrap();
        assert_eq!(table.row("0").unwrap().outcome, RouteOutcome::Routed(vec![OUTPUT1.into()]));
        assert_eq!(table.row("1").unwrap().outcome, RouteOutcome::Routed(vec![OUTPUT2.into()]));
        for row in &table.rows {
            assert!(row.output_populations.iter().all(|(_, p)| (0.0..=1.0 + 1e-12).contains(p)));
        }
    }
}
