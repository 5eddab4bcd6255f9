//! Transmon-circuit description of the two-output router: qubits 1, 2 and
//! the control C, each coupled to C through a capacitor `C_z` in parallel
//! with a junction `E_Jz`, and an input qubit coupled to the outputs through
//! `C_x`.
//!
//! Two routes to the spin-model couplings are provided. The closed form
//! follows second-order degenerate perturbation theory on the quartic
//! (Taylor-expanded) circuit Hamiltonian. The numeric route diagonalizes the
//! same truncated three-mode Hamiltonian and reads the couplings off the
//! dressed spectrum.
//!
//! Energies are angular frequencies in rad/µs, capacitances in fF.

mod numeric;

pub use numeric::{
    extract_couplings_numeric, full_circuit_hamiltonian, numeric_couplings, numeric_couplings_with_convergence,
    CircuitHamiltonian, NumericCouplings, TruncationConvergence, DEFAULT_LEVELS, MIN_LEVELS, MODE_LABELS, OVERLAP_THRESHOLD,
};

use nalgebra::{Matrix3, Matrix4};

use crate::error::{Error, Result};
use crate::router::STRONG_INEQUALITY_WARN;
use crate::units::{ghz_to_rad_per_us, inverse_femtofarad_to_rad_per_us, rad_per_us_to_ghz};

/// Ratio above which a "much smaller than" condition is reported.
pub const WEAK_COUPLING_WARN: f64 = 0.25;
/// Ratio `|J^x_12 ± J^xz_12| / |J^z|` above which the residual output-output
/// coupling is reported.
pub const RESIDUAL_COUPLING_WARN: f64 = 0.2;

/// Circuit parameters. The single shunt capacitance `c_q` is used for
/// qubits 1, 2 and C, and `c_z`, `e_z` for both couplers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CircuitParams {
    /// Shunt capacitance, fF.
    pub c_q: f64,
    /// Coupler capacitance, fF.
    pub c_z: f64,
    /// Input coupling capacitance, fF.
    pub c_x: f64,
    /// Input junction energy, rad/µs.
    pub e_i: f64,
    pub e_1: f64,
    pub e_2: f64,
    pub e_c: f64,
    /// Coupler junction energy, rad/µs.
    pub e_z: f64,
}

impl CircuitParams {
    /// Capacitances in fF, junction energies in rad/µs.
    #[allow(clippy::too_many_arguments)]
    pub fn new(c_q: f64, c_z: f64, c_x: f64, e_i: f64, e_1: f64, e_2: f64, e_c: f64, e_z: f64) -> Result<Self> {
        let p = Self {
            c_q,
            c_z,
            c_x,
            e_i,
            e_1,
            e_2,
            e_c,
            e_z,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same as [`CircuitParams::new`] with junction energies given as
    /// `E/h` in GHz.
    #[allow(clippy::too_many_arguments)]
    pub fn from_ghz(c_q: f64, c_z: f64, c_x: f64, e_i: f64, e_1: f64, e_2: f64, e_c: f64, e_z: f64) -> Result<Self> {
        Self::new(
            c_q,
            c_z,
            c_x,
            ghz_to_rad_per_us(e_i),
            ghz_to_rad_per_us(e_1),
            ghz_to_rad_per_us(e_2),
            ghz_to_rad_per_us(e_c),
            ghz_to_rad_per_us(e_z),
        )
    }

    /// Example parameter set: `C_q = 80`, `C_z = 13.7`, `C_x = 0.082` fF and
    /// `E_I = 19.52`, `E_J1 = 19.22`, `E_J2 = 19.52`, `E_JC = 38.74`,
    /// `E_Jz = 3.46` GHz.
    pub fn table_one() -> Self {
        Self::from_ghz(80.0, 13.7, 0.082, 19.52, 19.22, 19.52, 38.74, 3.46).expect("preset is valid")
    }

    /// Table I with both couplers removed (`C_z = 0`, `E_Jz = 0`).
    pub fn zero_coupler() -> Self {
        Self {
            c_z: 0.0,
            e_z: 0.0,
            ..Self::table_one()
        }
    }

    /// Shunt capacitances and junction energies must be positive; coupler
    /// elements may vanish.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c_q", self.c_q),
            ("c_x", self.c_x),
            ("e_i", self.e_i),
            ("e_1", self.e_1),
            ("e_2", self.e_2),
            ("e_c", self.e_c),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("c_z", self.c_z), ("e_z", self.e_z)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// Weak-coupling conditions `E_Jz ≪ E_J` and `C_z ≪ C_q` that are only
    /// weakly met.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let ej = self.e_1.min(self.e_2).min(self.e_c);
        let r = self.e_z / ej;
        if r >= WEAK_COUPLING_WARN {
            out.push(format!("e_z/e_j = {r:.3} is not small (>= {WEAK_COUPLING_WARN})"));
        }
        let r = self.c_z / self.c_q;
        if r >= WEAK_COUPLING_WARN {
            out.push(format!("c_z/c_q = {r:.3} is not small (>= {WEAK_COUPLING_WARN})"));
        }
        out
    }
}

/// Units block of a circuit parameter file.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitUnits {
    /// Only `"fF"` is accepted.
    pub capacitance: String,
    /// `"GHz"` for `E/h` or `"rad/us"`.
    pub energy: String,
}

/// On-disk form of [`CircuitParams`]: the same field names plus a
/// mandatory `units` block.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub units: CircuitUnits,
    pub c_q: f64,
    pub c_z: f64,
    pub c_x: f64,
    pub e_i: f64,
    pub e_1: f64,
    pub e_2: f64,
    pub e_c: f64,
    pub e_z: f64,
}

impl CircuitFile {
    pub fn into_params(self) -> Result<CircuitParams> {
        if self.units.capacitance != "fF" {
            return Err(Error::InvalidParameter(format!(
                "unsupported capacitance unit {:?}, expected \"fF\"",
                self.units.capacitance
            )));
        }
        let e = |v: f64| -> Result<f64> {
            match self.units.energy.as_str() {
                "GHz" => Ok(ghz_to_rad_per_us(v)),
                "rad/us" => Ok(v),
                other => Err(Error::InvalidParameter(format!(
                    "unsupported energy unit {other:?}, expected \"GHz\" or \"rad/us\""
                ))),
            }
        };
        CircuitParams::new(
            self.c_q,
            self.c_z,
            self.c_x,
            e(self.e_i)?,
            e(self.e_1)?,
            e(self.e_2)?,
            e(self.e_c)?,
            e(self.e_z)?,
        )
    }

    /// File form with energies in GHz.
    pub fn from_params(p: &CircuitParams) -> Self {
        Self {
            units: CircuitUnits {
                capacitance: "fF".into(),
                energy: "GHz".into(),
            },
            c_q: p.c_q,
            c_z: p.c_z,
            c_x: p.c_x,
            e_i: rad_per_us_to_ghz(p.e_i),
            e_1: rad_per_us_to_ghz(p.e_1),
            e_2: rad_per_us_to_ghz(p.e_2),
            e_c: rad_per_us_to_ghz(p.e_c),
            e_z: rad_per_us_to_ghz(p.e_z),
        }
    }
}

/// Capacitance matrix of nodes `(1, 2, C)` in fF.
pub fn capacitance_matrix(p: &CircuitParams) -> Matrix3<f64> {
    let (cq, cz) = (p.c_q, p.c_z);
    Matrix3::new(
        cq + cz, 0.0, -cz, //
        0.0, cq + cz, -cz, //
        -cz, -cz, cq + 2.0 * cz,
    )
}

/// Capacitance matrix of nodes `(I, 1, 2, C)` in fF, including the input
/// coupling capacitors.
pub fn capacitance_matrix_with_input(p: &CircuitParams) -> Matrix4<f64> {
    let (cq, cz, cx) = (p.c_q, p.c_z, p.c_x);
    Matrix4::new(
        cq + 2.0 * cx, -cx, -cx, 0.0, //
        -cx, cq + cz + cx, 0.0, -cz, //
        -cx, 0.0, cq + cz + cx, -cz, //
        0.0, -cz, -cz, cq + 2.0 * cz,
    )
}

/// Inverse capacitance matrix of `(1, 2, C)` as an energy scale in rad/µs.
pub fn inverse_capacitance(p: &CircuitParams) -> Result<Matrix3<f64>> {
    let inv = capacitance_matrix(p)
        .cholesky()
        .ok_or_else(|| Error::Singular("capacitance matrix is not positive definite".into()))?
        .inverse();
    Ok(inv.map(inverse_femtofarad_to_rad_per_us))
}

/// Inverse of [`capacitance_matrix_with_input`] in rad/µs.
pub fn inverse_capacitance_with_input(p: &CircuitParams) -> Result<Matrix4<f64>> {
    let inv = capacitance_matrix_with_input(p)
        .cholesky()
        .ok_or_else(|| Error::Singular("capacitance matrix is not positive definite".into()))?
        .inverse();
    Ok(inv.map(inverse_femtofarad_to_rad_per_us))
}

/// Single-mode quantities of the uncoupled transmons, ordered `(1, 2, C)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DerivedModeParams {
    /// `C^{-1}` in rad/µs.
    pub cap_inv: [[f64; 3]; 3],
    /// `Ẽ_J1 = E_J1 + E_Jz`, `Ẽ_J2 = E_J2 + E_Jz`, `Ẽ_JC = E_JC + 2E_Jz`.
    pub e_j_tilde: [f64; 3],
    /// `E_Ci = (C^{-1})_ii / 8`.
    pub e_c_modes: [f64; 3],
    /// `ζ_i = sqrt((C^{-1})_ii / Ẽ_Ji)`.
    pub zeta: [f64; 3],
    /// `ω_i = sqrt(8 Ẽ_Ji E_Ci) + α_i` minus the coupler-junction shift.
    pub omega: [f64; 3],
    /// `α_i = −E_Ci`.
    pub alpha: [f64; 3],
    pub omega_bar: f64,
    pub small_delta: f64,
    pub big_delta: f64,
}

pub fn derive_mode_params(p: &CircuitParams) -> Result<DerivedModeParams> {
    let ci = inverse_capacitance(p)?;
    let e_j_tilde = [p.e_1 + p.e_z, p.e_2 + p.e_z, p.e_c + 2.0 * p.e_z];
    let mut e_c_modes = [0.0; 3];
    let mut zeta = [0.0; 3];
    let mut alpha = [0.0; 3];
    let mut omega = [0.0; 3];
    for i in 0..3 {
        e_c_modes[i] = ci[(i, i)] / 8.0;
        zeta[i] = (ci[(i, i)] / e_j_tilde[i]).sqrt();
        alpha[i] = -e_c_modes[i];
        omega[i] = (8.0 * e_j_tilde[i] * e_c_modes[i]).sqrt() + alpha[i];
    }
    let zc = zeta[2];
    omega[0] -= p.e_z * zeta[0] * zc / 8.0;
    omega[1] -= p.e_z * zeta[1] * zc / 8.0;
    omega[2] -= p.e_z * (zeta[0] + zeta[1]) * zc / 8.0;
    let omega_bar = (omega[0] + omega[1]) / 2.0;
    let mut cap_inv = [[0.0; 3]; 3];
    for (i, row) in cap_inv.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = ci[(i, j)];
        }
    }
    Ok(DerivedModeParams {
        cap_inv,
        e_j_tilde,
        e_c_modes,
        zeta,
        omega,
        alpha,
        omega_bar,
        small_delta: (omega[0] - omega[1]) / 2.0,
        big_delta: omega[2] - omega_bar,
    })
}

/// Bare couplings of the quartic circuit Hamiltonian, rad/µs.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CouplingStrengths {
    pub g_z: [f64; 2],
    pub g_x: [f64; 2],
    pub g_x12: f64,
    pub g_xz: [f64; 2],
}

impl CouplingStrengths {
    /// `γ_iC(n, m) = g_xi + g_xzi (n ζ_i + m ζ_C)` for output `i ∈ {0, 1}`.
    pub fn gamma(&self, d: &DerivedModeParams, i: usize, n: f64, m: f64) -> f64 {
        self.g_x[i] + self.g_xz[i] * (n * d.zeta[i] + m * d.zeta[2])
    }
}

pub fn coupling_strengths(p: &CircuitParams, d: &DerivedModeParams) -> CouplingStrengths {
    let z = d.zeta;
    let ez = p.e_z;
    let mut g_z = [0.0; 2];
    let mut g_x = [0.0; 2];
    let mut g_xz = [0.0; 2];
    for i in 0..2 {
        let s = (z[i] * z[2]).sqrt();
        g_z[i] = -ez * z[i] * z[2] / 4.0;
        g_x[i] = d.cap_inv[i][2] / (2.0 * s) - ez * s / 2.0 + ez * (z[i] + z[2]) * s / 16.0;
        g_xz[i] = ez * s / 16.0;
    }
    CouplingStrengths {
        g_z,
        g_x,
        g_x12: d.cap_inv[0][1] / (2.0 * (z[0] * z[1]).sqrt()),
        g_xz,
    }
}

/// Spin-model parameters of outputs and control, plus the input coupling.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EffectiveSpinParams {
    pub delta_1: f64,
    pub delta_2: f64,
    pub delta_c: f64,
    /// `J^z_i` for outputs 1 and 2.
    pub jz: [f64; 2],
    pub jx12: f64,
    pub jxz12: f64,
    /// Input-output coupling `J^x_{I,j}`.
    pub jx_in: f64,
    pub couplings: CouplingStrengths,
}

impl EffectiveSpinParams {
    /// Residual output-output coupling that is not small against `J^z`.
    pub fn warnings(&self) -> Vec<String> {
        let jz = self.jz[0].abs().max(self.jz[1].abs());
        let residual = (self.jx12 + self.jxz12).abs().max((self.jx12 - self.jxz12).abs());
        if jz == 0.0 {
            return if residual > 0.0 {
                vec!["jz vanishes while the residual output coupling does not".into()]
            } else {
                Vec::new()
            };
        }
        let r = residual / jz;
        if r > RESIDUAL_COUPLING_WARN {
            vec![format!("|jx12 ± jxz12|/|jz| = {r:.3} exceeds {RESIDUAL_COUPLING_WARN}")]
        } else {
            Vec::new()
        }
    }
}

/// Second-order effective couplings with `γ_i(n, m) = γ_iC(n, m)`:
///
/// * `Δ_1 = −δ + g_z1/2 − s_1`, `Δ_2 = δ + g_z2/2 − s_2`,
///   `Δ_C = (g_z1 + g_z2)/2 + s_1 + s_2` with
///   `s_i = [γ_i(1,1)² + γ_i(1,3)² − γ_i(3,1)²]/Δ`,
/// * `J^z_i = g_zi/4 + [γ_i(3,1)² − γ_i(1,3)²]/(2Δ)`,
/// * `J^x_12 = g_x12 − γ_1(1,3)γ_2(1,3)/Δ`,
///   `J^xz_12 = [γ_1(1,3)γ_2(1,3) − γ_1(1,1)γ_2(1,1)]/Δ`,
/// * `J^x_{I,j} = C_x/(2 C̃_I C̃_1 sqrt(ζ_1 ζ_2))` with effective node
///   capacitances `C̃_k = 1/(C^{-1})_kk` of the four-node matrix.
///
/// Second-order terms are quadratic in the `γ`, which keeps every
/// correction an energy.
pub fn effective_spin_params(
    p: &CircuitParams,
    d: &DerivedModeParams,
    g: &CouplingStrengths,
) -> Result<EffectiveSpinParams> {
    let big = d.big_delta;
    if big == 0.0 || !big.is_finite() {
        return Err(Error::SingularPerturbation(format!("control detuning is {big}")));
    }
    let gx_max = g.g_x[0].abs().max(g.g_x[1].abs());
    if big.abs() < STRONG_INEQUALITY_WARN * gx_max {
        log::warn!(
            "|Δ|/max|g_x| = {:.3} is below {STRONG_INEQUALITY_WARN}",
            big.abs() / gx_max
        );
    }
    let gam = |i: usize, n: f64, m: f64| g.gamma(d, i, n, m);
    let shift = |i: usize| (gam(i, 1.0, 1.0).powi(2) + gam(i, 1.0, 3.0).powi(2) - gam(i, 3.0, 1.0).powi(2)) / big;
    let jz = [0, 1].map(|i| g.g_z[i] / 4.0 + (gam(i, 3.0, 1.0).powi(2) - gam(i, 1.0, 3.0).powi(2)) / (2.0 * big));
    let jx12 = g.g_x12 - gam(0, 1.0, 3.0) * gam(1, 1.0, 3.0) / big;
    let jxz12 = (gam(0, 1.0, 3.0) * gam(1, 1.0, 3.0) - gam(0, 1.0, 1.0) * gam(1, 1.0, 1.0)) / big;

    let c4_inv = capacitance_matrix_with_input(p)
        .try_inverse()
        .ok_or_else(|| Error::Singular("four-node capacitance matrix".into()))?;
    let c_tilde_in = 1.0 / c4_inv[(0, 0)];
    let c_tilde_1 = 1.0 / c4_inv[(1, 1)];
    let jx_in = inverse_femtofarad_to_rad_per_us(
        p.c_x / (2.0 * c_tilde_in * c_tilde_1 * (d.zeta[0] * d.zeta[1]).sqrt()),
    );

    Ok(EffectiveSpinParams {
        delta_1: -d.small_delta + g.g_z[0] / 2.0 - shift(0),
        delta_2: d.small_delta + g.g_z[1] / 2.0 - shift(1),
        delta_c: (g.g_z[0] + g.g_z[1]) / 2.0 + shift(0) + shift(1),
        jz,
        jx12,
        jxz12,
        jx_in,
        couplings: *g,
    })
}

/// Closed-form pipeline from circuit parameters to spin-model parameters.
pub fn closed_form(p: &CircuitParams) -> Result<(DerivedModeParams, EffectiveSpinParams)> {
    let d = derive_mode_params(p)?;
    let g = coupling_strengths(p, &d);
    Ok((d, effective_spin_params(p, &d, &g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{mhz_to_rad_per_us, rad_per_us_to_mhz};

    #[test]
    fn capacitance_matrix_layout() {
        let p = CircuitParams::table_one();
        let c = capacitance_matrix(&p);
        assert!((c - c.transpose()).abs().max() <= 1e-15);
        assert_eq!(c[(0, 0)], 93.7);
        assert_eq!(c[(2, 2)], 80.0 + 27.4);
        assert_eq!(c[(0, 1)], 0.0);
        assert_eq!(c[(0, 2)], -13.7);
        assert!(c.cholesky().is_some());
    }

    #[test]
    fn outputs_couple_capacitively_through_the_control() {
        let ci = inverse_capacitance(&CircuitParams::table_one()).unwrap();
        assert!(ci[(0, 1)] > 0.0);
        let decoupled = inverse_capacitance(&CircuitParams::zero_coupler()).unwrap();
        assert_eq!(decoupled[(0, 1)], 0.0);
        assert_eq!(decoupled[(0, 2)], 0.0);
    }

    #[test]
    fn inverse_capacitance_matches_direct_inverse() {
        // independent route: LU inverse of the fF matrix, then 4e²/h in GHz·fF
        let p = CircuitParams::table_one();
        let lu = capacitance_matrix(&p).try_inverse().unwrap();
        let ghz_ff = 4.0 * crate::units::ELEMENTARY_CHARGE.powi(2) / crate::units::PLANCK * 1e15 / 1e9;
        let ci = inverse_capacitance(&p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = ghz_to_rad_per_us(lu[(i, j)] * ghz_ff);
                assert!((ci[(i, j)] - want).abs() <= 1e-9 * want.abs().max(1.0));
            }
        }
        assert!((rad_per_us_to_ghz(ci[(0, 0)]) - 1.6858).abs() < 1e-3);
    }

    #[test]
    fn mode_params_of_the_example_circuit() {
        let d = derive_mode_params(&CircuitParams::table_one()).unwrap();
        for i in 0..3 {
            assert_eq!(d.alpha[i], -d.e_c_modes[i]);
            assert!(d.zeta[i] > 0.0 && d.zeta[i] < 0.3);
        }
        assert!((rad_per_us_to_ghz(d.e_c_modes[0]) - 0.2107).abs() < 1e-3);
        assert!((d.zeta[2] - 0.18117).abs() < 1e-4);
        let g = coupling_strengths(&CircuitParams::table_one(), &d);
        let gx = g.g_x[0].abs().max(g.g_x[1].abs());
        assert!(d.big_delta.abs() > 10.0 * gx);
    }

    #[test]
    fn symmetric_outputs_have_no_splitting() {
        let mut p = CircuitParams::table_one();
        p.e_1 = p.e_2;
        let d = derive_mode_params(&p).unwrap();
        assert!(d.small_delta.abs() <= 1e-12 * d.omega_bar);
        assert!(d.omega[0] == d.omega[1]);
    }

    #[test]
    fn coupling_signs_and_symmetry() {
        let p = CircuitParams::table_one();
        let d = derive_mode_params(&p).unwrap();
        let g = coupling_strengths(&p, &d);
        assert!(g.g_z[0] < 0.0 && g.g_z[1] < 0.0);
        let mut sym = p;
        sym.e_1 = sym.e_2;
        let ds = derive_mode_params(&sym).unwrap();
        let gs = coupling_strengths(&sym, &ds);
        assert!((gs.g_z[0] - gs.g_z[1]).abs() <= 1e-12);
    }

    #[test]
    fn decoupled_limit_has_no_couplings() {
        let p = CircuitParams::zero_coupler();
        let d = derive_mode_params(&p).unwrap();
        let g = coupling_strengths(&p, &d);
        assert_eq!(g.g_z, [0.0, 0.0]);
        assert_eq!(g.g_x, [0.0, 0.0]);
        assert_eq!(g.g_xz, [0.0, 0.0]);
        assert_eq!(g.g_x12, 0.0);
        let e = effective_spin_params(&p, &d, &g).unwrap();
        assert!(e.jz[0].abs() <= 1e-12 && e.jx12.abs() <= 1e-12 && e.jxz12.abs() <= 1e-12);
    }

    #[test]
    fn without_g_xz_only_the_first_order_term_survives() {
        let p = CircuitParams::table_one();
        let d = derive_mode_params(&p).unwrap();
        let mut g = coupling_strengths(&p, &d);
        g.g_xz = [0.0, 0.0];
        let e = effective_spin_params(&p, &d, &g).unwrap();
        assert_eq!(e.jz[0], g.g_z[0] / 4.0);
        assert_eq!(e.jz[1], g.g_z[1] / 4.0);
    }

    #[test]
    fn zero_detuning_is_singular() {
        let p = CircuitParams::table_one();
        let mut d = derive_mode_params(&p).unwrap();
        let g = coupling_strengths(&p, &d);
        d.big_delta = 0.0;
        assert!(matches!(
            effective_spin_params(&p, &d, &g),
            Err(Error::SingularPerturbation(_))
        ));
    }

    #[test]
    fn closed_form_couplings_of_the_example_circuit() {
        let (_, e) = closed_form(&CircuitParams::table_one()).unwrap();
        let target = mhz_to_rad_per_us(-9.95);
        assert!(((e.jz[0] - target) / target).abs() < 0.15, "{}", rad_per_us_to_mhz(e.jz[0]));
        let target = mhz_to_rad_per_us(2.78);
        assert!(((e.jx_in - target) / target).abs() < 0.15, "{}", rad_per_us_to_mhz(e.jx_in));
    }

    #[test]
    fn weak_coupling_warnings() {
        assert!(CircuitParams::table_one().warnings().is_empty());
        let mut p = CircuitParams::table_one();
        p.c_z = 30.0;
        assert_eq!(p.warnings().len(), 1);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(CircuitParams::from_ghz(0.0, 13.7, 0.082, 19.52, 19.22, 19.52, 38.74, 3.46).is_err());
        assert!(CircuitParams::from_ghz(80.0, -1.0, 0.082, 19.52, 19.22, 19.52, 38.74, 3.46).is_err());
        assert!(CircuitParams::from_ghz(80.0, 13.7, 0.082, 19.52, f64::NAN, 19.52, 38.74, 3.46).is_err());
    }

    #[test]
    fn file_round_trip() {
        let p = CircuitParams::table_one();
        let file = CircuitFile::from_params(&p);
        let json = serde_json::to_string(&file).unwrap();
        let back: CircuitFile = serde_json::from_str(&json).unwrap();
        let q = back.into_params().unwrap();
        assert!((q.e_z - p.e_z).abs() <= 1e-9 * p.e_z);
        let bad = json.replace("\"fF\"", "\"pF\"");
        assert!(serde_json::from_str::<CircuitFile>(&bad).unwrap().into_params().is_err());
        let unknown = json.replacen('{', "{\"extra\":1,", 1);
        assert!(serde_json::from_str::<CircuitFile>(&unknown).is_err());
    }
}
