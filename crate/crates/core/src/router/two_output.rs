use std::f64::consts::FRAC_PI_2;

use super::{exchange, require_finite, require_roles, term, transfer_time, CONTROL, INPUT, OUTPUT1, OUTPUT2, STRONG_INEQUALITY_WARN};
use crate::error::{Error, Result};
use crate::linalg::HermitianSpectrum;
use crate::operator::{Local, Operator};
use crate::register::QubitRegister;

/// Register `[input, output1, output2, control]`.
pub fn two_output_register() -> QubitRegister {
    QubitRegister::new([INPUT, OUTPUT1, OUTPUT2, CONTROL]).expect("static labels are valid")
}

/// Detunings `(Δ_O1, Δ_O2) = (2J^z, −2J^z)` that put the input in resonance
/// with output 1 for control `|0⟩` and with output 2 for control `|1⟩`.
pub fn standard_detunings(jz: f64) -> (f64, f64) {
    (2.0 * jz, -2.0 * jz)
}

/// Couplings and detunings of the two-output router, in rad/µs.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TwoOutputParams {
    pub jz: f64,
    pub jx: f64,
    pub delta_o1: f64,
    pub delta_o2: f64,
}

impl TwoOutputParams {
    pub fn new(jz: f64, jx: f64, delta_o1: f64, delta_o2: f64) -> Result<Self> {
        for (name, v) in [("jz", jz), ("jx", jx), ("delta_o1", delta_o1), ("delta_o2", delta_o2)] {
            require_finite(name, v)?;
        }
        if jx == 0.0 {
            return Err(Error::InvalidParameter("jx must be nonzero".into()));
        }
        Ok(Self {
            jz,
            jx,
            delta_o1,
            delta_o2,
        })
    }

    pub fn with_standard_detunings(jz: f64, jx: f64) -> Result<Self> {
        let (d1, d2) = standard_detunings(jz);
        Self::new(jz, jx, d1, d2)
    }

    /// Standard detunings with `J^x = |J^z| / ratio`.
    pub fn from_ratio(jz: f64, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0) || !ratio.is_finite() {
            return Err(Error::InvalidParameter(format!("ratio must be positive, got {ratio}")));
        }
        Self::with_standard_detunings(jz, jz.abs() / ratio)
    }

    /// `|J^z / J^x|`.
    pub fn ratio(&self) -> f64 {
        (self.jz / self.jx).abs()
    }

    pub fn transfer_time(&self) -> f64 {
        transfer_time(self.jx)
    }

    pub fn has_standard_detunings(&self) -> bool {
        let (d1, d2) = standard_detunings(self.jz);
        let tol = 1e-12 * self.jz.abs().max(1.0);
        (self.delta_o1 - d1).abs() <= tol && (self.delta_o2 - d2).abs() <= tol
    }

    /// Conditions of the rotating-wave picture that are only weakly met.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let r = (4.0 * self.jz / self.jx).abs();
        if r < STRONG_INEQUALITY_WARN {
            out.push(format!("|4 jz/jx| = {r:.3} is below {STRONG_INEQUALITY_WARN}; leakage to the closed output is significant"));
        }
        out
    }
}

pub fn two_output_hamiltonian(p: &TwoOutputParams) -> Result<Operator> {
    two_output_hamiltonian_on(&two_output_register(), p)
}

/// `H = −(Δ_O1/2)σ^z_O1 − (Δ_O2/2)σ^z_O2 + J^z(σ^z_O1 + σ^z_O2)σ^z_C
///      + (J^x/2)[σ^x_I(σ^x_O1 + σ^x_O2) + σ^y_I(σ^y_O1 + σ^y_O2)]`.
pub fn two_output_hamiltonian_on(register: &QubitRegister, p: &TwoOutputParams) -> Result<Operator> {
    require_roles(register, &[INPUT, OUTPUT1, OUTPUT2, CONTROL])?;
    let mut h = term(register, &[(OUTPUT1, Local::Z)], -p.delta_o1 / 2.0)?;
    h += &term(register, &[(OUTPUT2, Local::Z)], -p.delta_o2 / 2.0)?;
    for out in [OUTPUT1, OUTPUT2] {
        h += &term(register, &[(out, Local::Z), (CONTROL, Local::Z)], p.jz)?;
        h += &exchange(register, INPUT, out, p.jx)?;
    }
    Ok(h)
}

/// Rotating-frame Hamiltonian `J^x[σ^−_I σ^+_O1 P0_C + σ^−_I σ^+_O2 P1_C + h.c.]`.
pub fn rwa_effective_hamiltonian(p: &TwoOutputParams) -> Result<Operator> {
    if !p.has_standard_detunings() {
        return Err(Error::InvalidParameter(
            "the effective Hamiltonian requires standard detunings".into(),
        ));
    }
    Ok(p.jx * transfer_generator())
}

/// `G = σ^−_I σ^+_O1 |0⟩⟨0|_C + σ^−_I σ^+_O2 |1⟩⟨1|_C + h.c.` on the
/// standard register.
pub fn transfer_generator() -> Operator {
    let reg = two_output_register();
    let hop = |out: &str, proj: Local| -> Operator {
        let fwd = term(&reg, &[(INPUT, Local::Lower), (out, Local::Raise), (CONTROL, proj)], 1.0)
            .expect("static labels are valid");
        let back = fwd.dagger();
        fwd + back
    };
    hop(OUTPUT1, Local::Proj0) + hop(OUTPUT2, Local::Proj1)
}

/// Ideal routing unitary `U_T = exp(−i(π/2)G)`.
pub fn ideal_transfer_unitary() -> Operator {
    let g = transfer_generator();
    let u = HermitianSpectrum::new(g.matrix()).propagator(FRAC_PI_2);
    Operator::new(g.register().clone(), u).expect("shape preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::router::total_z;
    use crate::state::basis_state;
    use crate::C64;
    use std::f64::consts::PI;

    fn fig2() -> TwoOutputParams {
        TwoOutputParams::from_ratio(2.0 * PI * 10.0, 4.192).unwrap()
    }

    fn diag(h: &Operator, bits: &str) -> f64 {
        let i = h.register().index_of_bits(bits).unwrap();
        h.matrix()[(i, i)].re
    }

    #[test]
    fn standard_detunings_follow_jz() {
        let jz = 2.0 * PI * 10.0;
        let (d1, d2) = standard_detunings(jz);
        assert!((d1 - 2.0 * PI * 20.0).abs() < 1e-12);
        assert!((d2 + 2.0 * PI * 20.0).abs() < 1e-12);
        assert_eq!(standard_detunings(0.0), (0.0, -0.0));
        assert_eq!(standard_detunings(-1.5), (-3.0, 3.0));
    }

    #[test]
    fn hamiltonian_is_hermitian_and_conserves_excitations() {
        let h = two_output_hamiltonian(&fig2()).unwrap();
        assert!(h.hermiticity_error() <= 1e-12);
        let n = total_z(h.register(), &[INPUT, OUTPUT1, OUTPUT2, CONTROL]).unwrap();
        assert!(h.commutator(&n).unwrap().max_abs() <= 1e-12);
        let n_io = total_z(h.register(), &[INPUT, OUTPUT1, OUTPUT2]).unwrap();
        assert!(h.commutator(&n_io).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn diagonal_selects_the_resonant_output() {
        let h = two_output_hamiltonian(&fig2()).unwrap();
        assert!((diag(&h, "1000") - diag(&h, "0100")).abs() < 1e-12);
        assert!((diag(&h, "1001") - diag(&h, "0011")).abs() < 1e-12);
        let jz = fig2().jz;
        assert!(((diag(&h, "1000") - diag(&h, "0010")).abs() - 4.0 * jz).abs() < 1e-9);
        assert!(((diag(&h, "1001") - diag(&h, "0101")).abs() - 4.0 * jz).abs() < 1e-9);
    }

    #[test]
    fn effective_hamiltonian_connects_one_output_per_control() {
        let p = fig2();
        let h = rwa_effective_hamiltonian(&p).unwrap();
        let reg = h.register().clone();
        let out = h.apply(&basis_state(&reg, "1000").unwrap()).unwrap();
        let idx = reg.index_of_bits("0100").unwrap();
        for (k, a) in out.amplitudes().iter().enumerate() {
            let want = if k == idx { p.jx } else { 0.0 };
            assert!((a - C64::new(want, 0.0)).norm() < 1e-12);
        }
        let out = h.apply(&basis_state(&reg, "1001").unwrap()).unwrap();
        assert!((out.amplitudes()[reg.index_of_bits("0011").unwrap()].re - p.jx).abs() < 1e-12);
        let a = reg.index_of_bits("0101").unwrap();
        let b = reg.index_of_bits("1001").unwrap();
        assert_eq!(h.matrix()[(a, b)], C64::new(0.0, 0.0));
        let off = TwoOutputParams::new(p.jz, p.jx, 0.0, 0.0).unwrap();
        assert!(rwa_effective_hamiltonian(&off).is_err());
    }

    #[test]
    fn role_mismatch_is_rejected() {
        let reg = QubitRegister::new(["input", "output1", "output2", "ctrl"]).unwrap();
        assert!(matches!(two_output_hamiltonian_on(&reg, &fig2()), Err(Error::Label(_))));
        let permuted = QubitRegister::new(["control", "output2", "output1", "input"]).unwrap();
        assert!(two_output_hamiltonian_on(&permuted, &fig2()).is_ok());
    }

    #[test]
    fn zero_jx_is_invalid() {
        assert!(TwoOutputParams::with_standard_detunings(1.0, 0.0).is_err());
        assert!(TwoOutputParams::from_ratio(1.0, 0.0).is_err());
    }

    #[test]
    fn ideal_unitary_swaps_with_minus_i() {
        let u = ideal_transfer_unitary();
        assert!(u.unitarity_error() < 1e-10);
        let reg = u.register().clone();
        let out = u.apply(&basis_state(&reg, "1000").unwrap()).unwrap();
        let target = basis_state(&reg, "0100").unwrap();
        let amp = target.inner(&out).unwrap();
        assert!((amp - C64::new(0.0, -1.0)).norm() < 1e-12);
        for bits in ["0000", "0001"] {
            let s = basis_state(&reg, bits).unwrap();
            assert!((u.apply(&s).unwrap().fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
