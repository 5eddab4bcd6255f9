//! Master equation `dρ/dt = −i[H,ρ] + Σ_c (cρc† − ½{c†c, ρ})` with
//! collapse operators `√γ_1 σ^−_q` and `√(γ_φ/2) σ^z_q` on every qubit.
//!
//! The generator acts on `vec(ρ)` with row-major index `i·d + j` and is
//! stored as independent dense blocks.

use nalgebra::DMatrix;

use super::grid::TimeGrid;
use super::noise::NoiseModel;
use super::PropagationResult;
use crate::error::{Error, Result};
use crate::linalg::{connected_blocks, rk4_step_matrix, BlockMatrix};
use crate::operator::{ladder, pauli, Axis, LadderSign, Operator, HERMITIAN_TOL};
use crate::register::QubitRegister;
use crate::state::DensityMatrix;
use crate::C64;

/// Largest tolerated change of `Tr ρ` before integration is declared unstable.
pub const TRACE_DRIFT_TOL: f64 = 1e-6;

/// Linear map on density matrices in block form.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    register: QubitRegister,
    matrix: BlockMatrix,
}

impl Superoperator {
    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.matrix.blocks().iter().map(|(idx, _)| idx.len()).collect()
    }

    /// Dense `d² × d²` matrix on row-major `vec(ρ)`.
    pub fn to_dense(&self) -> DMatrix<C64> {
        self.matrix.to_dense()
    }

    pub fn apply_matrix(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let d = self.register.dim();
        let v = nalgebra::DVector::from_column_slice(rho.transpose().as_slice());
        let out = self.matrix.mul_vec(&v);
        DMatrix::from_row_slice(d, d, out.as_slice())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.register() != &self.register {
            return Err(Error::Label(format!(
                "state on {} does not match map on {}",
                rho.register(),
                self.register
            )));
        }
        Ok(rho.with_matrix(self.apply_matrix(rho.matrix())))
    }

    /// `self ∘ other` (apply `other` first). Both must come from generators
    /// with the same block structure.
    pub fn then_after(&self, other: &Superoperator) -> Self {
        Self {
            register: self.register.clone(),
            matrix: self.matrix.compose(&other.matrix),
        }
    }
}

/// Lindblad generator in block form.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    register: QubitRegister,
    blocks: BlockMatrix,
}

impl Liouvillian {
    /// Generator for Hamiltonian `h` with optional per-qubit noise.
    pub fn new(h: &Operator, noise: Option<&NoiseModel>) -> Result<Self> {
        h.ensure_hermitian(HERMITIAN_TOL)?;
        let register = h.register().clone();
        let d = register.dim();

        let mut collapse: Vec<Operator> = Vec::new();
        if let Some(noise) = noise {
            noise.validate()?;
            for label in register.labels() {
                let (g1, gphi) = noise.rates(label)?;
                if g1 > 0.0 {
                    collapse.push(ladder(&register, label, LadderSign::Lower)?.scaled(C64::new(g1.sqrt(), 0.0)));
                }
                if gphi > 0.0 {
                    collapse.push(pauli(&register, label, Axis::Z)?.scaled(C64::new((gphi / 2.0).sqrt(), 0.0)));
                }
            }
        }

        // K = −iH − ½ Σ c†c, so that dρ/dt = Kρ + ρK† + Σ cρc†.
        let mut k = h.matrix() * C64::new(0.0, -1.0);
        for c in &collapse {
            k -= (c.matrix().adjoint() * c.matrix()) * C64::new(0.5, 0.0);
        }

        let mut triplets: Vec<(usize, usize, C64)> = Vec::new();
        for (i, kk, v) in nonzeros(&k) {
            for j in 0..d {
                triplets.push((i * d + j, kk * d + j, v));
                triplets.push((j * d + i, j * d + kk, v.conj()));
            }
        }
        for c in &collapse {
            let nz = nonzeros(c.matrix());
            for &(i, kk, a) in &nz {
                for &(j, l, b) in &nz {
                    triplets.push((i * d + j, kk * d + l, a * b.conj()));
                }
            }
        }

        let n = d * d;
        let groups = connected_blocks(n, triplets.iter().filter(|t| t.0 != t.1).map(|t| (t.0, t.1)));
        let mut slot = vec![(0usize, 0usize); n];
        for (b, idx) in groups.iter().enumerate() {
            for (pos, &i) in idx.iter().enumerate() {
                slot[i] = (b, pos);
            }
        }
        let mut mats: Vec<DMatrix<C64>> = groups.iter().map(|g| DMatrix::zeros(g.len(), g.len())).collect();
        for (r, c, v) in triplets {
            let (b, pr) = slot[r];
            let (_, pc) = slot[c];
            mats[b][(pr, pc)] += v;
        }
        Ok(Self {
            register,
            blocks: BlockMatrix::new(n, groups.into_iter().zip(mats).collect()),
        })
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.blocks().iter().map(|(idx, _)| idx.len()).collect()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.blocks.to_dense()
    }

    /// `steps` fixed RK4 steps of length `step`, composed exactly.
    pub fn rk4_map(&self, step: f64, steps: u32) -> Superoperator {
        Superoperator {
            register: self.register.clone(),
            matrix: self.blocks.map_blocks(|l| rk4_step_matrix(l, step).pow(steps)),
        }
    }

    /// Exact `exp(L t)` by dense exponentiation of each block.
    pub fn exact_map(&self, t: f64) -> Superoperator {
        Superoperator {
            register: self.register.clone(),
            matrix: self.blocks.map_blocks(|l| (l * C64::new(t, 0.0)).exp()),
        }
    }
}

fn nonzeros(m: &DMatrix<C64>) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != C64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Evolves `rho0` under `h` and `noise` with fixed-step RK4, sampling at
/// the grid's output times. Non-physical carriers are evolved by linearity.
pub fn evolve_lindblad(
    h: &Operator,
    rho0: &DensityMatrix,
    noise: Option<&NoiseModel>,
    grid: &TimeGrid,
) -> Result<PropagationResult<DensityMatrix>> {
    if rho0.register() != h.register() {
        return Err(Error::Label(format!(
            "state on {} does not match Hamiltonian on {}",
            rho0.register(),
            h.register()
        )));
    }
    grid.validate_for(h)?;
    let l = Liouvillian::new(h, noise)?;
    let mut stepper = RkStepper::new(&l, grid);
    let mut states = Vec::with_capacity(grid.sample_times().len());
    let mut rho = rho0.clone();
    let mut t = 0.0;
    for &s in grid.sample_times() {
        rho = stepper.advance(&rho, s - t)?;
        check_trace(rho0, &rho, s)?;
        states.push(rho.clone());
        t = s;
    }
    Ok(PropagationResult::new(h.register().clone(), grid.sample_times().to_vec(), states))
}

/// Reuses the RK4 map while consecutive spans coincide.
pub(crate) struct RkStepper<'a> {
    generator: &'a Liouvillian,
    grid: &'a TimeGrid,
    cached: Option<(f64, Superoperator)>,
}

impl<'a> RkStepper<'a> {
    pub(crate) fn new(generator: &'a Liouvillian, grid: &'a TimeGrid) -> Self {
        Self {
            generator,
            grid,
            cached: None,
        }
    }

    pub(crate) fn advance(&mut self, rho: &DensityMatrix, span: f64) -> Result<DensityMatrix> {
        if span <= 0.0 {
            return Ok(rho.clone());
        }
        let reuse = matches!(&self.cached, Some((s, _)) if (s - span).abs() <= 1e-12 * span);
        if !reuse {
            let steps = self.grid.steps_for(span);
            self.cached = Some((span, self.generator.rk4_map(span / steps as f64, steps)));
        }
        let (_, map) = self.cached.as_ref().expect("map cached above");
        map.apply(rho)
    }
}

pub(crate) fn check_trace(rho0: &DensityMatrix, rho: &DensityMatrix, t: f64) -> Result<()> {
    let tr0 = rho0.trace();
    let tr = rho.trace();
    if !rho.matrix().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Integrator(format!("non-finite state at t = {t}")));
    }
    let drift = (tr - tr0).norm();
    if drift > TRACE_DRIFT_TOL * tr0.norm().max(1.0) {
        return Err(Error::Integrator(format!("trace drift {drift:e} at t = {t}")));
    }
    Ok(())
}
