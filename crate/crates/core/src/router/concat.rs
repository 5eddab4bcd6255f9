use super::schedule::{DetuningSchedule, ScheduleWindow};
use super::{exchange, require_finite, term, transfer_time, STRONG_INEQUALITY_WARN};
use crate::error::{Error, Result};
use crate::operator::{Local, Operator};
use crate::register::QubitRegister;

/// Below this ratio the "much larger than" conditions are hard errors.
pub const CONCAT_MIN_RATIO: f64 = 4.0;

pub fn bus_label(i: usize) -> String {
    format!("bus{i}")
}

pub fn output_label(i: usize) -> String {
    format!("output{i}")
}

pub fn control_label(i: usize) -> String {
    format!("control{i}")
}

/// Register `[bus0, …, busN, output1, …, outputN, control1, …, controlN]`.
/// `bus0` is the input and `busN` the final output.
pub fn concat_register(n: usize) -> Result<QubitRegister> {
    if n < 1 {
        return Err(Error::InvalidParameter("a concatenated router needs n >= 1".into()));
    }
    let labels = (0..=n)
        .map(bus_label)
        .chain((1..=n).map(output_label))
        .chain((1..=n).map(control_label));
    QubitRegister::new(labels)
}

/// Parameters of `n` concatenated routers, in rad/µs and µs.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ConcatParams {
    pub n: usize,
    pub jz: f64,
    pub jx: f64,
    pub delta: f64,
    pub step_time: f64,
}

impl ConcatParams {
    /// Validates `|Δ| ≫ |J^x|` and `|2J^z ± Δ| ≫ |J^x|`: ratios below
    /// [`CONCAT_MIN_RATIO`] are rejected, ratios below 10 are reported by
    /// [`ConcatParams::warnings`].
    pub fn new(n: usize, jz: f64, jx: f64, delta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("a concatenated router needs n >= 1".into()));
        }
        require_finite("jz", jz)?;
        require_finite("jx", jx)?;
        require_finite("delta", delta)?;
        if jx == 0.0 {
            return Err(Error::InvalidParameter("jx must be nonzero".into()));
        }
        let p = Self {
            n,
            jz,
            jx,
            delta,
            step_time: transfer_time(jx),
        };
        for (name, ratio) in p.inequality_ratios() {
            if ratio < CONCAT_MIN_RATIO {
                return Err(Error::InvalidParameter(format!(
                    "{name}/|jx| = {ratio:.3} is below {CONCAT_MIN_RATIO}"
                )));
            }
        }
        Ok(p)
    }

    /// Detuning `2|J^z| + 20|J^x|`, which keeps every condition at ratio ≥ 10.
    pub fn default_detuning(jz: f64, jx: f64) -> f64 {
        2.0 * jz.abs() + 20.0 * jx.abs()
    }

    pub fn with_default_detuning(n: usize, jz: f64, jx: f64) -> Result<Self> {
        Self::new(n, jz, jx, Self::default_detuning(jz, jx))
    }

    fn inequality_ratios(&self) -> [(&'static str, f64); 3] {
        let jx = self.jx.abs();
        [
            ("|delta|", self.delta.abs() / jx),
            ("|2jz + delta|", (2.0 * self.jz + self.delta).abs() / jx),
            ("|2jz - delta|", (2.0 * self.jz - self.delta).abs() / jx),
        ]
    }

    pub fn warnings(&self) -> Vec<String> {
        self.inequality_ratios()
            .into_iter()
            .filter(|(_, r)| *r < STRONG_INEQUALITY_WARN)
            .map(|(name, r)| format!("{name}/|jx| = {r:.3} is below {STRONG_INEQUALITY_WARN}"))
            .collect()
    }

    pub fn total_time(&self) -> f64 {
        self.n as f64 * self.step_time
    }

    /// Qubit that should hold the excitation at the end of the protocol for
    /// the given control bits: `output_i` for the first control in `|1⟩`,
    /// the final bus if all controls are `|0⟩`.
    pub fn destination(&self, controls: &[u8]) -> Result<String> {
        if controls.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: controls.len(),
            });
        }
        Ok(match controls.iter().position(|&c| c == 1) {
            Some(i) => output_label(i + 1),
            None => bus_label(self.n),
        })
    }
}

pub fn concat_static_hamiltonian(p: &ConcatParams) -> Result<Operator> {
    concat_static_hamiltonian_on(&concat_register(p.n)?, p)
}

/// `H = J^z Σ_i [σ^z_Oi(σ^z_Ci + 1) + σ^z_Bi(σ^z_Ci − 1)]
///      + (J^x/2) Σ_i [σ^x_B(i−1)(σ^x_Oi + σ^x_Bi) + σ^y_B(i−1)(σ^y_Oi + σ^y_Bi)]`.
pub fn concat_static_hamiltonian_on(register: &QubitRegister, p: &ConcatParams) -> Result<Operator> {
    let expected = concat_register(p.n)?;
    let roles: Vec<&str> = expected.labels().iter().map(String::as_str).collect();
    super::require_roles(register, &roles)?;
    let mut h = Operator::zeros(register);
    for i in 1..=p.n {
        let (o, b, c, prev) = (output_label(i), bus_label(i), control_label(i), bus_label(i - 1));
        h += &term(register, &[(&o, Local::Z), (&c, Local::Z)], p.jz)?;
        h += &term(register, &[(&o, Local::Z)], p.jz)?;
        h += &term(register, &[(&b, Local::Z), (&c, Local::Z)], p.jz)?;
        h += &term(register, &[(&b, Local::Z)], -p.jz)?;
        h += &exchange(register, &prev, &o, p.jx)?;
        h += &exchange(register, &prev, &b, p.jx)?;
    }
    Ok(h)
}

/// Windows `[(i−1)T, iT)` carrying `Δ[σ^z_B(i−1) + σ^z_Bi + Σ_{j≤i} σ^z_Oj]`.
pub fn concat_schedule(p: &ConcatParams) -> Result<DetuningSchedule> {
    let register = concat_register(p.n)?;
    let mut windows = Vec::with_capacity(p.n);
    for i in 1..=p.n {
        let mut t = term(&register, &[(&bus_label(i - 1), Local::Z)], p.delta)?;
        t += &term(&register, &[(&bus_label(i), Local::Z)], p.delta)?;
        for j in 1..=i {
            t += &term(&register, &[(&output_label(j), Local::Z)], p.delta)?;
        }
        windows.push(ScheduleWindow {
            t_start: (i - 1) as f64 * p.step_time,
            t_end: i as f64 * p.step_time,
            term: t,
        });
    }
    DetuningSchedule::new(windows)
}
