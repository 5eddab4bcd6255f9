//! Time evolution: exact unitary propagation, Lindblad master-equation
//! integration and piecewise-constant schedules.

mod grid;
mod lindblad;
mod noise;
mod schedule;

pub use grid::{linspace, TimeGrid};
pub use lindblad::{evolve_lindblad, Liouvillian, Superoperator, TRACE_DRIFT_TOL};
pub use noise::{DephasingConvention, NoiseModel, QubitNoise};
pub use schedule::{evolve_schedule, evolve_schedule_with_noise};

use crate::error::{Error, Result};
use crate::linalg::HermitianSpectrum;
use crate::operator::{Operator, HERMITIAN_TOL};
use crate::register::QubitRegister;
use crate::state::{DensityMatrix, StateVector};

/// States sampled along a trajectory, with per-qubit excited populations.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    /// `populations[k][q]`: excited population of qubit `q` at `times[k]`.
    pub populations: Vec<Vec<f64>>,
    register: QubitRegister,
}

/// States that report per-qubit excited populations.
pub trait Populations {
    fn qubit_populations(&self) -> Vec<f64>;
}

impl Populations for StateVector {
    fn qubit_populations(&self) -> Vec<f64> {
        self.populations()
    }
}

impl Populations for DensityMatrix {
    fn qubit_populations(&self) -> Vec<f64> {
        self.populations()
    }
}

impl<S: Populations> PropagationResult<S> {
    pub(crate) fn new(register: QubitRegister, times: Vec<f64>, states: Vec<S>) -> Self {
        let populations = states.iter().map(Populations::qubit_populations).collect();
        Self {
            times,
            states,
            populations,
            register,
        }
    }
}

impl<S> PropagationResult<S> {
    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn final_state(&self) -> &S {
        self.states.last().expect("a trajectory has at least one sample")
    }

    /// Population series of qubit `label`.
    pub fn population(&self, label: &str) -> Result<Vec<f64>> {
        let q = self.register.index_of(label)?;
        Ok(self.populations.iter().map(|p| p[q]).collect())
    }
}

/// Time-independent unitary propagator `exp(−iHt)` built from one
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct UnitaryPropagator {
    register: QubitRegister,
    spectrum: HermitianSpectrum,
}

impl UnitaryPropagator {
    pub fn new(h: &Operator) -> Result<Self> {
        h.ensure_hermitian(HERMITIAN_TOL)?;
        Ok(Self {
            register: h.register().clone(),
            spectrum: HermitianSpectrum::new(h.matrix()),
        })
    }

    pub fn at(&self, t: f64) -> Operator {
        Operator::new(self.register.clone(), self.spectrum.propagator(t)).expect("shape preserved")
    }

    pub fn apply(&self, t: f64, psi: &StateVector) -> Result<StateVector> {
        if psi.register() != &self.register {
            return Err(Error::Label(format!(
                "state on {} does not match Hamiltonian on {}",
                psi.register(),
                self.register
            )));
        }
        StateVector::new(self.register.clone(), self.spectrum.apply(t, psi.amplitudes()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.eigenvalues()
    }
}

/// `U(t) = exp(−iHt)` for Hermitian `h`.
pub fn propagator(h: &Operator, t: f64) -> Result<Operator> {
    Ok(UnitaryPropagator::new(h)?.at(t))
}

/// Exact evolution of `psi0` under `h`, sampled at `times`.
pub fn evolve_unitary(h: &Operator, psi0: &StateVector, times: &[f64]) -> Result<PropagationResult<StateVector>> {
    let u = UnitaryPropagator::new(h)?;
    let states = times
        .iter()
        .map(|&t| u.apply(t, psi0))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropagationResult::new(h.register().clone(), times.to_vec(), states))
}
