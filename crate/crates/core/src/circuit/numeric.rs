use nalgebra::{DMatrix, SymmetricEigen};

use super::{derive_mode_params, inverse_capacitance_with_input, CircuitParams};
use crate::error::{Error, Result};

/// Mode order of the numeric Hamiltonian; the first mode is the most
/// significant digit of the basis index.
pub const MODE_LABELS: [&str; 3] = ["output1", "output2", "control"];
/// Smallest accepted truncation per mode.
pub const MIN_LEVELS: usize = 4;
/// Truncation used by default: 343-dimensional, couplings converged to
/// better than 0.5% per added level.
pub const DEFAULT_LEVELS: usize = 7;
/// Minimum squared overlap between a dressed state and its bare label.
pub const OVERLAP_THRESHOLD: f64 = 0.7;
/// Number of low-lying eigenvalues compared in the convergence diagnostic.
const CONVERGENCE_EIGENVALUES: usize = 8;

/// Truncated three-mode circuit Hamiltonian (rad/µs) on the Fock basis
/// `|n_1, n_2, n_C⟩`, index `(n_1·L + n_2)·L + n_C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitHamiltonian {
    params: CircuitParams,
    levels: usize,
    matrix: DMatrix<f64>,
}

impl CircuitHamiltonian {
    pub fn params(&self) -> &CircuitParams {
        &self.params
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn index_of(&self, n: [usize; 3]) -> Result<usize> {
        if n.iter().any(|&k| k >= self.levels) {
            return Err(Error::Label(format!(
                "occupation {n:?} exceeds the truncation {}",
                self.levels
            )));
        }
        Ok((n[0] * self.levels + n[1]) * self.levels + n[2])
    }

    pub fn symmetry_error(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).abs().max()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

fn annihilation(levels: usize) -> DMatrix<f64> {
    DMatrix::from_fn(levels, levels, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

struct ModeOps {
    number: DMatrix<f64>,
    x: DMatrix<f64>,
    p: DMatrix<f64>,
}

impl ModeOps {
    fn new(levels: usize) -> Self {
        let a = annihilation(levels);
        let ad = a.transpose();
        Self {
            number: &ad * &a,
            x: &a + &ad,
            p: &ad - &a,
        }
    }

    fn x_pow(&self, k: u32) -> DMatrix<f64> {
        (1..k).fold(self.x.clone(), |acc, _| acc * &self.x)
    }
}

fn kron3(ops: [&DMatrix<f64>; 3]) -> DMatrix<f64> {
    ops[0].kronecker(ops[1]).kronecker(ops[2])
}

fn embed(levels: usize, factors: &[(usize, &DMatrix<f64>)]) -> DMatrix<f64> {
    let id = DMatrix::<f64>::identity(levels, levels);
    let mut ops = [&id, &id, &id];
    for &(k, m) in factors {
        ops[k] = m;
    }
    kron3(ops)
}

/// Quartic circuit Hamiltonian of outputs and control with `levels` Fock
/// states per mode:
///
/// ```text
/// Σ_i [sqrt(8Ẽ_Ji E_Ci) b†b − (E_Ci/12)(b + b†)^4]
///  − Σ_{i≠j} (C^{-1})_ij/(4 sqrt(ζ_i ζ_j)) (b_i† − b_i)(b_j† − b_j)
///  + Σ_{i=1,2} E_Jz [ (ζ_C X_i X_C^3 + ζ_i X_i^3 X_C) sqrt(ζ_i ζ_C)/24
///                     − sqrt(ζ_i ζ_C) X_i X_C / 2 − ζ_i ζ_C X_i^2 X_C^2/16 ]
/// ```
///
/// with `X = b + b†`. Operator powers are taken inside the truncated space
/// and number-nonconserving terms are kept.
pub fn full_circuit_hamiltonian(p: &CircuitParams, levels: usize) -> Result<CircuitHamiltonian> {
    if levels < MIN_LEVELS {
        return Err(Error::Truncation(format!(
            "{levels} levels per mode, at least {MIN_LEVELS} are required"
        )));
    }
    let d = derive_mode_params(p)?;
    let m = ModeOps::new(levels);
    let x2 = m.x_pow(2);
    let x3 = m.x_pow(3);
    let x4 = m.x_pow(4);
    let dim = levels.pow(3);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..3 {
        let ec = d.e_c_modes[i];
        let w = (8.0 * d.e_j_tilde[i] * ec).sqrt();
        let single = &m.number * w - &x4 * (ec / 12.0);
        h += embed(levels, &[(i, &single)]);
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j && d.cap_inv[i][j] != 0.0 {
                let c = d.cap_inv[i][j] / (4.0 * (d.zeta[i] * d.zeta[j]).sqrt());
                h -= embed(levels, &[(i, &m.p), (j, &m.p)]) * c;
            }
        }
    }
    if p.e_z != 0.0 {
        let zc = d.zeta[2];
        for i in 0..2 {
            let zi = d.zeta[i];
            let s = (zi * zc).sqrt();
            h += embed(levels, &[(i, &m.x), (2, &x3)]) * (p.e_z * zc * s / 24.0);
            h += embed(levels, &[(i, &x3), (2, &m.x)]) * (p.e_z * zi * s / 24.0);
            h -= embed(levels, &[(i, &m.x), (2, &m.x)]) * (p.e_z * s / 2.0);
            h -= embed(levels, &[(i, &x2), (2, &x2)]) * (p.e_z * zi * zc / 16.0);
        }
    }
    Ok(CircuitHamiltonian {
        params: *p,
        levels,
        matrix: h,
    })
}

/// Couplings read off the dressed spectrum, rad/µs.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NumericCouplings {
    pub levels: usize,
    /// `[E(1,0,1) − E(1,0,0) − E(0,0,1) + E(0,0,0)]/4` and the analogue for
    /// output 2.
    pub jz: [f64; 2],
    /// Dressed `0→1` transition frequencies of outputs 1, 2 (averaged over
    /// the control state) and of the control.
    pub frequencies: [f64; 3],
    /// Output frequencies relative to their mean.
    pub detunings: [f64; 2],
    /// Control frequency relative to the mean output frequency.
    pub delta_c: f64,
    /// Input-output exchange `(C^{-1})_{I1} |⟨0|q_I|1⟩| |⟨0|q_1|1⟩|` from the
    /// single-mode eigenstates of input and output 1.
    pub jx_in: f64,
    /// Smallest squared overlap of an identified dressed state.
    pub min_overlap: f64,
}

/// Dressed states of the bare labels used by the extraction.
const LABELS: [[usize; 3]; 6] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1]];

fn identify(h: &CircuitHamiltonian, eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> Result<([f64; 6], f64)> {
    let mut energies = [0.0; 6];
    let mut used = Vec::with_capacity(LABELS.len());
    let mut min_overlap = f64::INFINITY;
    for (slot, n) in LABELS.iter().enumerate() {
        let row = h.index_of(*n)?;
        let (k, overlap) = eig
            .eigenvectors
            .row(row)
            .iter()
            .map(|v| v * v)
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty spectrum");
        let label = format!("|{},{},{}>", n[0], n[1], n[2]);
        if overlap < OVERLAP_THRESHOLD || used.contains(&k) {
            return Err(Error::StateIdentification { label, overlap });
        }
        used.push(k);
        energies[slot] = eig.eigenvalues[k];
        min_overlap = min_overlap.min(overlap);
    }
    Ok((energies, min_overlap))
}

/// `|⟨0|q|1⟩|` of a single transmon mode with `q = i(b† − b)/sqrt(2ζ)`,
/// in the same truncated quartic model.
fn charge_matrix_element(e_j: f64, cap_inv: f64, levels: usize) -> f64 {
    let zeta = (cap_inv / e_j).sqrt();
    let ec = cap_inv / 8.0;
    let m = ModeOps::new(levels);
    let h = &m.number * (8.0 * e_j * ec).sqrt() - m.x_pow(4) * (ec / 12.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..levels).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let v0 = eig.eigenvectors.column(order[0]);
    let v1 = eig.eigenvectors.column(order[1]);
    (v0.transpose() * &m.p * v1)[(0, 0)].abs() / (2.0 * zeta).sqrt()
}

/// Diagonalizes `h` and extracts the spin-model couplings.
pub fn extract_couplings_numeric(h: &CircuitHamiltonian, p: &CircuitParams) -> Result<NumericCouplings> {
    if h.params() != p {
        return Err(Error::InvalidParameter(
            "Hamiltonian was built from different circuit parameters".into(),
        ));
    }
    let eig = SymmetricEigen::new(h.matrix().clone());
    let (e, min_overlap) = identify(h, &eig)?;
    let [e000, e100, e010, e001, e101, e011] = e;
    let jz = [(e101 - e100 - e001 + e000) / 4.0, (e011 - e010 - e001 + e000) / 4.0];
    let f1 = (e101 - e001 + e100 - e000) / 2.0;
    let f2 = (e011 - e001 + e010 - e000) / 2.0;
    let fc = e001 - e000;
    let mean = (f1 + f2) / 2.0;

    let c4 = inverse_capacitance_with_input(p)?;
    let q_in = charge_matrix_element(p.e_i, c4[(0, 0)], h.levels());
    let q_1 = charge_matrix_element(p.e_1 + p.e_z, c4[(1, 1)], h.levels());

    Ok(NumericCouplings {
        levels: h.levels(),
        jz,
        frequencies: [f1, f2, fc],
        detunings: [f1 - mean, f2 - mean],
        delta_c: fc - mean,
        jx_in: c4[(0, 1)] * q_in * q_1,
        min_overlap,
    })
}

pub fn numeric_couplings(p: &CircuitParams, levels: usize) -> Result<NumericCouplings> {
    extract_couplings_numeric(&full_circuit_hamiltonian(p, levels)?, p)
}

/// Change of the numeric results when the truncation grows by one level.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TruncationConvergence {
    pub levels: usize,
    /// Relative change of `J^z_1`, `J^z_2`.
    pub jz_relative_change: [f64; 2],
    pub jx_relative_change: f64,
    /// Largest shift of the lowest eigenvalues, relative to the mean output
    /// frequency.
    pub spectrum_shift: f64,
}

impl TruncationConvergence {
    /// Largest relative change over the reported couplings.
    pub fn max_coupling_change(&self) -> f64 {
        self.jz_relative_change
            .into_iter()
            .fold(self.jx_relative_change, f64::max)
    }
}

fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (b - a).abs() / scale
    }
}

/// Numeric couplings at `levels`, and their change at `levels + 1`.
pub fn numeric_couplings_with_convergence(
    p: &CircuitParams,
    levels: usize,
) -> Result<(NumericCouplings, TruncationConvergence)> {
    let h = full_circuit_hamiltonian(p, levels)?;
    let h_next = full_circuit_hamiltonian(p, levels + 1)?;
    let c = extract_couplings_numeric(&h, p)?;
    let c_next = extract_couplings_numeric(&h_next, p)?;
    let e = h.eigenvalues();
    let e_next = h_next.eigenvalues();
    let scale = (c.frequencies[0] + c.frequencies[1]) / 2.0;
    let shift = e
        .iter()
        .zip(&e_next)
        .take(CONVERGENCE_EIGENVALUES)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale.abs();
    let conv = TruncationConvergence {
        levels,
        jz_relative_change: [
            relative_change(c.jz[0], c_next.jz[0]),
            relative_change(c.jz[1], c_next.jz[1]),
        ],
        jx_relative_change: relative_change(c.jx_in, c_next.jx_in),
        spectrum_shift: shift,
    };
    Ok((c, conv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{mhz_to_rad_per_us, rad_per_us_to_mhz};

    #[test]
    fn too_few_levels_is_a_truncation_error() {
        let err = full_circuit_hamiltonian(&CircuitParams::table_one(), 3).unwrap_err();
        assert!(matches!(err, Error::Truncation(_)));
        assert!(err.is_numerical());
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let h = full_circuit_hamiltonian(&CircuitParams::table_one(), 5).unwrap();
        assert_eq!(h.dim(), 125);
        let scale = h.matrix().abs().max();
        assert!(h.symmetry_error() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn uncoupled_modes_have_transmon_gaps() {
        let p = CircuitParams::zero_coupler();
        let d = derive_mode_params(&p).unwrap();
        let h = full_circuit_hamiltonian(&p, 8).unwrap();
        let e = h.eigenvalues();
        let gap = e[1] - e[0];
        let want = (0..2).map(|i| d.omega[i]).fold(f64::INFINITY, f64::min);
        // perturbative gap; the quartic term also shifts levels at higher order
        assert!((gap - want).abs() < 0.01 * want, "{gap} vs {want}");
    }

    #[test]
    fn no_coupler_means_no_zz() {
        let p = CircuitParams::zero_coupler();
        let c = numeric_couplings(&p, 6).unwrap();
        let scale = (c.frequencies[0] + c.frequencies[1]) / 2.0;
        assert!(c.jz[0].abs() <= 1e-9 * scale);
        assert!(c.jz[1].abs() <= 1e-9 * scale);
    }

    #[test]
    fn extractor_reproduces_a_synthetic_spin_model() {
        // diagonal spin model −(Δ1/2)σz1 − (Δ2/2)σz2 + J1 σz1σzC + J2 σz2σzC − (ΔC/2)σzC
        // embedded in the lowest Fock levels of each mode, σz = +1 on |0⟩
        let p = CircuitParams::table_one();
        let levels = 4;
        let (d1, d2, dc, j1, j2) = (30_000.0, 31_000.0, 40_000.0, -66.0, -61.0);
        let sz = |n: usize| if n == 0 { 1.0 } else { -1.0 };
        let dim = levels * levels * levels;
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for n1 in 0..levels {
            for n2 in 0..levels {
                for nc in 0..levels {
                    let k = (n1 * levels + n2) * levels + nc;
                    let (a, b, c) = (sz(n1), sz(n2), sz(nc));
                    let extra = if n1 > 1 || n2 > 1 || nc > 1 { 1e6 + k as f64 } else { 0.0 };
                    m[(k, k)] = -d1 / 2.0 * a - d2 / 2.0 * b - dc / 2.0 * c + j1 * a * c + j2 * b * c + extra;
                }
            }
        }
        let h = CircuitHamiltonian {
            params: p,
            levels,
            matrix: m,
        };
        let c = extract_couplings_numeric(&h, &p).unwrap();
        assert!((c.jz[0] - j1).abs() < 1e-9);
        assert!((c.jz[1] - j2).abs() < 1e-9);
        assert!((c.frequencies[0] - d1).abs() < 1e-9);
        assert!((c.frequencies[2] - (dc - 2.0 * j1 - 2.0 * j2)).abs() < 1e-9);
        assert!((c.min_overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_mismatch_is_rejected() {
        let h = full_circuit_hamiltonian(&CircuitParams::table_one(), 4).unwrap();
        assert!(extract_couplings_numeric(&h, &CircuitParams::zero_coupler()).is_err());
    }

    #[test]
    fn example_circuit_dressed_states_are_well_identified() {
        let c = numeric_couplings(&CircuitParams::table_one(), 6).unwrap();
        assert!(c.min_overlap > 0.9);
        assert!(c.jz[0] < 0.0);
        let jx = rad_per_us_to_mhz(c.jx_in);
        assert!(jx > 2.0 && jx < 4.0, "{jx}");
        assert!((c.jz[0] - mhz_to_rad_per_us(-10.4)).abs() < mhz_to_rad_per_us(0.5));
    }

    #[test]
    fn truncation_convergence_of_the_example_circuit() {
        let p = CircuitParams::table_one();
        let (_, c6) = numeric_couplings_with_convergence(&p, 6).unwrap();
        let (_, c7) = numeric_couplings_with_convergence(&p, DEFAULT_LEVELS).unwrap();
        assert!(c6.spectrum_shift < 1e-2);
        assert!(c7.spectrum_shift < c6.spectrum_shift);
        assert!(c7.max_coupling_change() < 5e-3, "{c7:?}");
    }

    #[test]
    fn charge_matrix_element_of_a_harmonic_mode() {
        // with E_C → 0 relative to E_J the mode is harmonic: |⟨0|q|1⟩| = 1/sqrt(2ζ)
        let (ej, ci): (f64, f64) = (1e6, 1.0);
        let zeta = (ci / ej).sqrt();
        let q = charge_matrix_element(ej, ci, 6);
        assert!((q - 1.0 / (2.0 * zeta).sqrt()).abs() < 1e-3 * q);
    }
}
