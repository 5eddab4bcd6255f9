//! Dense operators on a [`QubitRegister`] and construction of embedded
//! single-qubit operators.
//!
//! Conventions: `σ^z = |0⟩⟨0| − |1⟩⟨1|`, `σ^x = |0⟩⟨1| + |1⟩⟨0|`,
//! `σ^y = −i|0⟩⟨1| + i|1⟩⟨0|`, and `σ^+ = |1⟩⟨0|` creates an excitation, so
//! that `σ^x = σ^+ + σ^−` and `σ^y = i(σ^+ − σ^−)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::register::QubitRegister;
use crate::C64;

/// Default elementwise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderSign {
    /// `σ^+ = |1⟩⟨0|`
    Raise,
    /// `σ^− = |0⟩⟨1|`
    Lower,
}

/// Single-qubit factor of a local tensor product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Local {
    X,
    Y,
    Z,
    Raise,
    Lower,
    /// `|0⟩⟨0|`
    Proj0,
    /// `|1⟩⟨1|`
    Proj1,
    Identity,
    /// Arbitrary 2×2 matrix in row-major order.
    Matrix([[C64; 2]; 2]),
}

impl Local {
    /// Row-major 2×2 matrix of the factor.
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Local::X => [[o, l], [l, o]],
            Local::Y => [[o, -i], [i, o]],
            Local::Z => [[l, o], [o, -l]],
            Local::Raise => [[o, o], [l, o]],
            Local::Lower => [[o, l], [o, o]],
            Local::Proj0 => [[l, o], [o, o]],
            Local::Proj1 => [[o, o], [o, l]],
            Local::Identity => [[l, o], [o, l]],
            Local::Matrix(m) => m,
        }
    }
}

impl From<Axis> for Local {
    fn from(axis: Axis) -> Self {
        match axis {
            Axis::X => Local::X,
            Axis::Y => Local::Y,
            Axis::Z => Local::Z,
        }
    }
}

impl From<LadderSign> for Local {
    fn from(sign: LadderSign) -> Self {
        match sign {
            LadderSign::Raise => Local::Raise,
            LadderSign::Lower => Local::Lower,
        }
    }
}

/// Dense complex operator on a labelled register.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    register: QubitRegister,
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn new(register: QubitRegister, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = register.dim();
        if matrix.nrows() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        if matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: matrix.ncols(),
            });
        }
        Ok(Self { register, matrix })
    }

    pub fn zeros(register: &QubitRegister) -> Self {
        let dim = register.dim();
        Self {
            register: register.clone(),
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(register: &QubitRegister) -> Self {
        let dim = register.dim();
        Self {
            register: register.clone(),
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// Diagonal operator with the given real entries.
    pub fn from_diagonal(register: &QubitRegister, diagonal: &[f64]) -> Result<Self> {
        if diagonal.len() != register.dim() {
            return Err(Error::Dimension {
                expected: register.dim(),
                found: diagonal.len(),
            });
        }
        let d = DVector::from_iterator(diagonal.len(), diagonal.iter().map(|&x| C64::new(x, 0.0)));
        Ok(Self {
            register: register.clone(),
            matrix: DMatrix::from_diagonal(&d),
        })
    }

    /// `coeff · ⊗_q factor_q`, with the identity on every qubit not listed.
    ///
    /// Built directly from the factor matrices in `O(dim · 2^k)` for `k`
    /// factors, so it stays cheap on the largest registers.
    pub fn local_product(
        register: &QubitRegister,
        factors: &[(&str, Local)],
        coeff: C64,
    ) -> Result<Self> {
        let mut slots: Vec<(usize, [[C64; 2]; 2])> = Vec::with_capacity(factors.len());
        for (label, local) in factors {
            let shift = register.shift_of(label)?;
            if slots.iter().any(|(s, _)| *s == shift) {
                return Err(Error::Label(format!(
                    "qubit '{label}' appears twice in a local product"
                )));
            }
            slots.push((shift, local.matrix()));
        }
        let dim = register.dim();
        let mask: usize = slots.iter().map(|(s, _)| 1usize << s).sum();
        let mut matrix = DMatrix::zeros(dim, dim);
        for row in 0..dim {
            let rest = row & !mask;
            for choice in 0..(1usize << slots.len()) {
                let mut col = rest;
                let mut value = coeff;
                for (k, (shift, m)) in slots.iter().enumerate() {
                    let cbit = (choice >> k) & 1;
                    let rbit = (row >> shift) & 1;
                    col |= cbit << shift;
                    value *= m[rbit][cbit];
                }
                if value != C64::new(0.0, 0.0) {
                    matrix[(row, col)] += value;
                }
            }
        }
        Ok(Self {
            register: register.clone(),
            matrix,
        })
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

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self {
            register: self.register.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `max |M − M†|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Errors with [`Error::NotHermitian`] unless Hermitian within `tol`
    /// relative to the largest entry (absolute below unit scale).
    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let err = self.hermiticity_error();
        if err > tol * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian(err));
        }
        Ok(())
    }

    /// `max |U†U − 1|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let prod = self.matrix.adjoint() * &self.matrix;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }

    /// The operator with all off-diagonal entries removed.
    pub fn diagonal_part(&self) -> Self {
        Self {
            register: self.register.clone(),
            matrix: DMatrix::from_diagonal(&self.matrix.diagonal()),
        }
    }

    /// Real parts of the diagonal entries.
    pub fn real_diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            register: self.register.clone(),
            matrix: &self.matrix * factor,
        }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.check_register(other)?;
        Ok(Self {
            register: self.register.clone(),
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        })
    }

    pub fn checked_add(&self, other: &Operator) -> Result<Operator> {
        self.check_register(other)?;
        Ok(Self {
            register: self.register.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn checked_mul(&self, other: &Operator) -> Result<Operator> {
        self.check_register(other)?;
        Ok(Self {
            register: self.register.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    fn check_register(&self, other: &Operator) -> Result<()> {
        if self.register != other.register {
            return Err(Error::Label(format!(
                "register mismatch: {} vs {}",
                self.register, other.register
            )));
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        self.checked_add(rhs).expect("operator addition")
    }
}

impl Add for Operator {
    type Output = Operator;

    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.register, rhs.register, "operator addition: register mismatch");
        self.matrix += &rhs.matrix;
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.register, rhs.register, "operator subtraction: register mismatch");
        Operator {
            register: self.register.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Sub for Operator {
    type Output = Operator;

    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.checked_mul(rhs).expect("operator product")
    }
}

impl Mul for Operator {
    type Output = Operator;

    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scaled(C64::new(self, 0.0))
    }
}

impl Mul<Operator> for f64 {
    type Output = Operator;

    fn mul(self, rhs: Operator) -> Operator {
        rhs.scaled(C64::new(self, 0.0))
    }
}

impl Mul<Operator> for C64 {
    type Output = Operator;

    fn mul(self, rhs: Operator) -> Operator {
        rhs.scaled(self)
    }
}

impl Neg for Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scaled(C64::new(-1.0, 0.0))
    }
}

/// Pauli operator `σ^axis` on qubit `label`, embedded in the full register.
pub fn pauli(register: &QubitRegister, label: &str, axis: Axis) -> Result<Operator> {
    Operator::local_product(register, &[(label, axis.into())], C64::new(1.0, 0.0))
}

/// Ladder operator `σ^±` on qubit `label`, embedded in the full register.
pub fn ladder(register: &QubitRegister, label: &str, sign: LadderSign) -> Result<Operator> {
    Operator::local_product(register, &[(label, sign.into())], C64::new(1.0, 0.0))
}
