//! Channel tomography on a subspace of initial states, average process
//! fidelity, a Haar Monte-Carlo estimator, routing tables and concurrence.

mod entanglement;
mod router;
mod routing;

pub use entanglement::{concurrence, which_path_state};
pub use router::{
    frame_alignment, two_output_channel, two_output_fidelity, two_output_map, two_output_subspace,
    Integrator,
};
pub use routing::{
    classify, locate_pair_transfer_time, three_output_routing_table, two_output_routing_table,
    RouteOutcome, RoutingRow, RoutingTable,
};

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dynamics::Superoperator;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::register::QubitRegister;
use crate::state::{basis_state, StateVector};
use crate::C64;

/// Largest `max |U†U − 1|` accepted for a target unitary.
pub const UNITARY_TOL: f64 = 1e-8;

/// Linear map on operators of a register.
pub trait QuantumMap {
    fn register(&self) -> &QubitRegister;
    fn apply_matrix(&self, rho: &DMatrix<C64>) -> Result<DMatrix<C64>>;
}

impl QuantumMap for Superoperator {
    fn register(&self) -> &QubitRegister {
        Superoperator::register(self)
    }

    fn apply_matrix(&self, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        Ok(Superoperator::apply_matrix(self, rho))
    }
}

/// Conjugation `ρ ↦ UρU†`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMap(Operator);

impl UnitaryMap {
    pub fn new(u: Operator) -> Result<Self> {
        let err = u.unitarity_error();
        if err > UNITARY_TOL {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self(u))
    }

    pub fn identity(register: &QubitRegister) -> Self {
        Self(Operator::identity(register))
    }
}

impl QuantumMap for UnitaryMap {
    fn register(&self) -> &QubitRegister {
        self.0.register()
    }

    fn apply_matrix(&self, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        Ok(self.0.matrix() * rho * self.0.matrix().adjoint())
    }
}

/// `ρ ↦ R 𝓔(ρ) R†`: a map followed by a fixed frame change `R`.
#[derive(Debug, Clone)]
pub struct FramedMap<M> {
    inner: M,
    frame: DMatrix<C64>,
}

impl<M: QuantumMap> FramedMap<M> {
    pub fn new(inner: M, frame: DMatrix<C64>) -> Result<Self> {
        let d = inner.register().dim();
        if frame.nrows() != d || frame.ncols() != d {
            return Err(Error::Dimension {
                expected: d,
                found: frame.nrows(),
            });
        }
        Ok(Self { inner, frame })
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

impl<M: QuantumMap> QuantumMap for FramedMap<M> {
    fn register(&self) -> &QubitRegister {
        self.inner.register()
    }

    fn apply_matrix(&self, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        Ok(&self.frame * self.inner.apply_matrix(rho)? * self.frame.adjoint())
    }
}

/// Orthonormal states spanning the subspace of initial states.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    register: QubitRegister,
    states: Vec<StateVector>,
}

impl SubspaceBasis {
    pub fn new(states: Vec<StateVector>) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty subspace basis".into()))?;
        let register = first.register().clone();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = a.inner(b)?;
                if (got - C64::new(want, 0.0)).norm() > 1e-10 {
                    return Err(Error::InvalidParameter(format!(
                        "basis states {i} and {j} are not orthonormal"
                    )));
                }
            }
        }
        Ok(Self { register, states })
    }

    /// Basis of computational states given as bitstrings.
    pub fn from_bits(register: &QubitRegister, bits: &[&str]) -> Result<Self> {
        Self::new(bits.iter().map(|b| basis_state(register, b)).collect::<Result<_>>()?)
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn n(&self) -> usize {
        self.states.len()
    }

    /// `|s_i⟩⟨s_j|` as a full-register matrix.
    pub fn carrier(&self, i: usize, j: usize) -> DMatrix<C64> {
        self.states[i].amplitudes() * self.states[j].amplitudes().adjoint()
    }

    /// `Σ_i c_i |s_i⟩` for subspace coordinates `c`.
    pub fn embed(&self, coeffs: &DVector<C64>) -> Result<StateVector> {
        if coeffs.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: coeffs.len(),
            });
        }
        let mut amps = DVector::zeros(self.register.dim());
        for (c, s) in coeffs.iter().zip(&self.states) {
            amps += s.amplitudes() * *c;
        }
        StateVector::new(self.register.clone(), amps)
    }
}

/// Images `𝓔(|i⟩⟨j|)` of every carrier of a subspace basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOnSubspace {
    basis: SubspaceBasis,
    /// Row-major in `(i, j)`.
    images: Vec<DMatrix<C64>>,
    pub metadata: BTreeMap<String, String>,
}

impl ChannelOnSubspace {
    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn image(&self, i: usize, j: usize) -> &DMatrix<C64> {
        &self.images[i * self.basis.n() + j]
    }

    /// `n² × n²` matrix with entries `⟨u_a|𝓔(|i⟩⟨j|)|u_b⟩` at
    /// `(a·n + b, i·n + j)`, where `u_a = U|s_a⟩`.
    pub fn action(&self, target: &Operator) -> Result<DMatrix<C64>> {
        let us = self.target_states(target)?;
        let n = self.basis.n();
        Ok(DMatrix::from_fn(n * n, n * n, |r, c| {
            let (a, b) = (r / n, r % n);
            let (i, j) = (c / n, c % n);
            us[a].dotc(&(self.image(i, j) * &us[b]))
        }))
    }

    /// `max_{i,j} |𝓔(|j⟩⟨i|) − 𝓔(|i⟩⟨j|)†|`.
    pub fn hermiticity_covariance_error(&self) -> f64 {
        let n = self.basis.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = self.image(j, i) - self.image(i, j).adjoint();
                worst = worst.max(d.iter().fold(0.0, |m, z| m.max(z.norm())));
            }
        }
        worst
    }

    fn target_states(&self, target: &Operator) -> Result<Vec<DVector<C64>>> {
        if target.register() != self.basis.register() {
            return Err(Error::Label("target and channel registers differ".into()));
        }
        let err = target.unitarity_error();
        if err > UNITARY_TOL {
            return Err(Error::NotUnitary(err));
        }
        Ok(self
            .basis
            .states()
            .iter()
            .map(|s| target.matrix() * s.amplitudes())
            .collect())
    }
}

/// Evolves every carrier `|i⟩⟨j|` of `basis` through `map`.
pub fn channel_tomography(map: &dyn QuantumMap, basis: &SubspaceBasis) -> Result<ChannelOnSubspace> {
    if map.register() != basis.register() {
        return Err(Error::Label("map and basis registers differ".into()));
    }
    let n = basis.n();
    let images = (0..n * n)
        .map(|k| map.apply_matrix(&basis.carrier(k / n, k % n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelOnSubspace {
        basis: basis.clone(),
        images,
        metadata: BTreeMap::new(),
    })
}

/// Closed-form average fidelity over the subspace,
/// `[Σ_ij ⟨u_i|𝓔(|j⟩⟨j|)|u_i⟩ + Σ_ij ⟨u_i|𝓔(|i⟩⟨j|)|u_j⟩] / (n(n+1))`.
pub fn average_process_fidelity(channel: &ChannelOnSubspace, target: &Operator) -> Result<f64> {
    let us = channel.target_states(target)?;
    let n = channel.basis.n();
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            sum += us[i].dotc(&(channel.image(j, j) * &us[i]));
            sum += us[i].dotc(&(channel.image(i, j) * &us[j]));
        }
    }
    Ok(sum.re / (n * (n + 1)) as f64)
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Minimum number of Haar samples.
pub const MIN_HAAR_SAMPLES: usize = 100;

/// Haar-random pure state in the subspace: `2n` standard normals, normalized.
pub fn haar_state(basis: &SubspaceBasis, rng: &mut ChaCha8Rng) -> Result<StateVector> {
    let n = basis.n();
    let raw: Vec<f64> = (0..2 * n).map(|_| StandardNormal.sample(rng)).collect();
    let coeffs = DVector::from_iterator(n, (0..n).map(|k| C64::new(raw[2 * k], raw[2 * k + 1])));
    let coeffs = coeffs.unscale(coeffs.norm());
    basis.embed(&coeffs)
}

/// Monte-Carlo estimate of `∫dψ ⟨ψ|U† 𝓔(|ψ⟩⟨ψ|) U|ψ⟩` over Haar-random
/// states of the subspace. A fixed seed reproduces the estimate exactly.
pub fn haar_monte_carlo_fidelity(
    map: &dyn QuantumMap,
    target: &Operator,
    basis: &SubspaceBasis,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < MIN_HAAR_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_HAAR_SAMPLES} samples are required, got {samples}"
        )));
    }
    if map.register() != basis.register() || target.register() != basis.register() {
        return Err(Error::Label("map, target and basis registers differ".into()));
    }
    let err = target.unitarity_error();
    if err > UNITARY_TOL {
        return Err(Error::NotUnitary(err));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let psi = haar_state(basis, &mut rng)?;
        let a = psi.amplitudes();
        let out = map.apply_matrix(&(a * a.adjoint()))?;
        let phi = target.matrix() * a;
        values.push(phi.dotc(&(out * &phi)).re);
    }
    let mean = values.iter().sum::<f64>() / samples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    Ok(MonteCarloEstimate {
        mean,
        stderr: (var / samples as f64).sqrt(),
        samples,
    })
}
