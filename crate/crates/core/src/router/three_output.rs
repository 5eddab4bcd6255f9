use super::{exchange, require_finite, require_roles, term, transfer_time, CONTROL1, CONTROL2, INPUT, OUTPUT1, OUTPUT2, OUTPUT3};
use crate::error::{Error, Result};
use crate::operator::{Local, Operator};
use crate::register::QubitRegister;

/// Register `[input, output1, output2, output3, control1, control2]`.
pub fn three_output_register() -> QubitRegister {
    QubitRegister::new([INPUT, OUTPUT1, OUTPUT2, OUTPUT3, CONTROL1, CONTROL2])
        .expect("static labels are valid")
}

/// Detuning setting of the three-output router.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThreeOutputMode {
    /// One open output per control configuration.
    Selective,
    /// Two open outputs, sharing the excitation as an entangled pair.
    Entangle,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ThreeOutputParams {
    pub jz: f64,
    pub jx: f64,
    pub delta: [f64; 3],
    pub mode: ThreeOutputMode,
}

impl ThreeOutputParams {
    /// Detunings `(−J^z, 2J^z, −J^z)` for [`ThreeOutputMode::Selective`] and
    /// `(J^z, 0, J^z)` for [`ThreeOutputMode::Entangle`].
    pub fn new(jz: f64, jx: f64, mode: ThreeOutputMode) -> Result<Self> {
        require_finite("jz", jz)?;
        require_finite("jx", jx)?;
        if jx == 0.0 {
            return Err(Error::InvalidParameter("jx must be nonzero".into()));
        }
        let delta = match mode {
            ThreeOutputMode::Selective => [-jz, 2.0 * jz, -jz],
            ThreeOutputMode::Entangle => [jz, 0.0, jz],
        };
        Ok(Self { jz, jx, delta, mode })
    }

    /// `π/(2|J^x|)`.
    pub fn transfer_time(&self) -> f64 {
        transfer_time(self.jx)
    }

    /// `T/√2`, the swap time when two outputs are open.
    pub fn pair_transfer_time(&self) -> f64 {
        self.transfer_time() / std::f64::consts::SQRT_2
    }
}

pub fn three_output_hamiltonian(p: &ThreeOutputParams) -> Result<Operator> {
    three_output_hamiltonian_on(&three_output_register(), p)
}

/// `H = −Σ_i Δ_i σ^z_i + J^z[(σ^z_1 + σ^z_2)σ^z_C1 + (σ^z_2 + σ^z_3)σ^z_C2]
///      + (J^x/2)Σ_i[σ^x_I σ^x_i + σ^y_I σ^y_i]`.
///
/// The single-qubit terms carry no factor 1/2, unlike the two-output router.
pub fn three_output_hamiltonian_on(register: &QubitRegister, p: &ThreeOutputParams) -> Result<Operator> {
    require_roles(register, &[INPUT, OUTPUT1, OUTPUT2, OUTPUT3, CONTROL1, CONTROL2])?;
    let outputs = [OUTPUT1, OUTPUT2, OUTPUT3];
    let mut h = Operator::zeros(register);
    for (out, d) in outputs.iter().zip(p.delta) {
        h += &term(register, &[(out, Local::Z)], -d)?;
        h += &exchange(register, INPUT, out, p.jx)?;
    }
    for (ctrl, pair) in [(CONTROL1, [OUTPUT1, OUTPUT2]), (CONTROL2, [OUTPUT2, OUTPUT3])] {
        for out in pair {
            h += &term(register, &[(out, Local::Z), (ctrl, Local::Z)], p.jz)?;
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::router::total_z;

    #[test]
    fn mode_detunings() {
        let jz = 3.0;
        let e = ThreeOutputParams::new(jz, 0.3, ThreeOutputMode::Entangle).unwrap();
        assert_eq!(e.delta, [jz, 0.0, jz]);
        let s = ThreeOutputParams::new(jz, 0.3, ThreeOutputMode::Selective).unwrap();
        assert_eq!(s.delta, [-jz, 2.0 * jz, -jz]);
        assert!((e.pair_transfer_time() * 2f64.sqrt() - e.transfer_time()).abs() < 1e-15);
    }

    #[test]
    fn hermitian_and_excitation_conserving() {
        for mode in [ThreeOutputMode::Selective, ThreeOutputMode::Entangle] {
            let p = ThreeOutputParams::new(6.0, 0.6, mode).unwrap();
            let h = three_output_hamiltonian(&p).unwrap();
            assert!(h.hermiticity_error() <= 1e-12);
            let labels: Vec<&str> = h.register().labels().iter().map(String::as_str).collect();
            let n = total_z(h.register(), &labels).unwrap();
            assert!(h.commutator(&n).unwrap().max_abs() <= 1e-12);
        }
    }

    #[test]
    fn wrong_register_is_rejected() {
        let p = ThreeOutputParams::new(1.0, 0.1, ThreeOutputMode::Selective).unwrap();
        let reg = QubitRegister::new(["input", "output1", "output2", "control"]).unwrap();
        assert!(three_output_hamiltonian_on(&reg, &p).is_err());
    }
}
