//! Pure and mixed states on a [`QubitRegister`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::register::QubitRegister;
use crate::C64;

/// Norm tolerance for physical state vectors.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    register: QubitRegister,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(register: QubitRegister, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::Dimension {
                expected: register.dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            register,
            amplitudes,
        })
    }

    /// Normalized copy of the given amplitudes.
    pub fn normalized(register: QubitRegister, amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NonPhysical("cannot normalize a zero vector".into()));
        }
        Self::new(register, amplitudes.unscale(norm))
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        same_register(&self.register, &other.register)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `|ψ⟩⟨ψ|` as a physical density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            register: self.register.clone(),
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
            physical: true,
        }
    }

    /// Excited-state (|1⟩) population of every qubit, in register order.
    pub fn populations(&self) -> Vec<f64> {
        let probs: Vec<f64> = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        excited_populations(&self.register, &probs)
    }

    /// Superposition `Σ c_k |k⟩` of other states on the same register.
    pub fn superpose(terms: &[(C64, &StateVector)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty superposition".into()))?;
        let mut amps = DVector::zeros(first.register.dim());
        for (c, s) in terms {
            same_register(&first.register, &s.register)?;
            amps += &s.amplitudes * *c;
        }
        Self::new(first.register.clone(), amps)
    }
}

/// Density matrix. Non-physical instances (e.g. the carriers `|i⟩⟨j|` used
/// in channel tomography) skip the trace, Hermiticity and positivity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: QubitRegister,
    matrix: DMatrix<C64>,
    physical: bool,
}

impl DensityMatrix {
    /// Physical density matrix: unit trace, Hermitian and positive
    /// semidefinite within tolerance.
    pub fn new(register: QubitRegister, matrix: DMatrix<C64>) -> Result<Self> {
        let rho = Self::carrier(register, matrix)?;
        rho.validate_physical()?;
        Ok(Self {
            physical: true,
            ..rho
        })
    }

    /// Arbitrary operator used as an input to a linear map.
    pub fn carrier(register: QubitRegister, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = register.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self {
            register,
            matrix,
            physical: false,
        })
    }

    /// Re-tags an evolved matrix, keeping the physical flag of `self`.
    pub(crate) fn with_matrix(&self, matrix: DMatrix<C64>) -> Self {
        Self {
            register: self.register.clone(),
            matrix,
            physical: self.physical,
        }
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn is_physical(&self) -> bool {
        self.physical
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr ρ²` (real part).
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Checks trace, Hermiticity (1e-10) and positivity (eigenvalues ≥ −1e-9).
    pub fn validate_physical(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::NonPhysical(format!("trace {tr} differs from 1")));
        }
        let n = self.matrix.nrows();
        for i in 0..n {
            for j in i..n {
                let d = (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm();
                if d > 1e-10 {
                    return Err(Error::NonPhysical(format!("not Hermitian ({d:e})")));
                }
            }
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -1e-9 {
                return Err(Error::NonPhysical(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(())
    }

    /// Excited-state population of every qubit, in register order.
    pub fn populations(&self) -> Vec<f64> {
        let probs: Vec<f64> = self.matrix.diagonal().iter().map(|z| z.re).collect();
        excited_populations(&self.register, &probs)
    }

    /// `⟨ψ|ρ|ψ⟩` (real part).
    pub fn overlap(&self, psi: &StateVector) -> Result<f64> {
        same_register(&self.register, psi.register())?;
        let a = psi.amplitudes();
        Ok(a.dotc(&(&self.matrix * a)).re)
    }
}

impl Operator {
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        same_register(self.register(), psi.register())?;
        StateVector::new(psi.register().clone(), self.matrix() * psi.amplitudes())
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        same_register(self.register(), psi.register())?;
        let a = psi.amplitudes();
        Ok(a.dotc(&(self.matrix() * a)))
    }
}

fn same_register(a: &QubitRegister, b: &QubitRegister) -> Result<()> {
    if a != b {
        return Err(Error::Label(format!("register mismatch: {a} vs {b}")));
    }
    Ok(())
}

fn excited_populations(register: &QubitRegister, probs: &[f64]) -> Vec<f64> {
    (0..register.len())
        .map(|q| {
            let shift = register.shift_at(q);
            probs
                .iter()
                .enumerate()
                .filter(|(idx, _)| (idx >> shift) & 1 == 1)
                .map(|(_, p)| p)
                .sum()
        })
        .collect()
}

/// Computational basis state from a bitstring in register order.
pub fn basis_state(register: &QubitRegister, bits: &str) -> Result<StateVector> {
    let index = register.index_of_bits(bits)?;
    let mut amps = DVector::zeros(register.dim());
    amps[index] = C64::new(1.0, 0.0);
    StateVector::new(register.clone(), amps)
}

/// Reduced density matrix on `keep`. The kept qubits retain their register
/// order regardless of the order in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::Label("partial trace needs at least one kept qubit".into()));
    }
    let reg = rho.register();
    let mut kept: Vec<usize> = Vec::with_capacity(keep.len());
    for label in keep {
        let idx = reg.index_of(label)?;
        if kept.contains(&idx) {
            return Err(Error::Label(format!("qubit '{label}' listed twice")));
        }
        kept.push(idx);
    }
    kept.sort_unstable();
    let labels: Vec<String> = kept.iter().map(|&i| reg.labels()[i].clone()).collect();
    let out_reg = QubitRegister::new(labels)?;
    let kept_shifts: Vec<usize> = kept.iter().map(|&i| reg.shift_at(i)).collect();
    let kept_mask: usize = kept_shifts.iter().map(|s| 1usize << s).sum();
    let reduce = |full: usize| -> usize {
        kept_shifts
            .iter()
            .fold(0usize, |acc, s| (acc << 1) | ((full >> s) & 1))
    };

    let dim = reg.dim();
    let mut out = DMatrix::zeros(out_reg.dim(), out_reg.dim());
    for i in 0..dim {
        let env = i & !kept_mask;
        let ri = reduce(i);
        for j in 0..dim {
            if j & !kept_mask == env {
                out[(ri, reduce(j))] += rho.matrix()[(i, j)];
            }
        }
    }
    Ok(DensityMatrix {
        register: out_reg,
        matrix: out,
        physical: rho.physical,
    })
}
