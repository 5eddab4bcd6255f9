use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("labeling error: {0}")]
    Label(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("register of {0} qubits exceeds the dense-storage cap of {max}", max = crate::register::MAX_QUBITS)]
    RegisterTooLarge(usize),

    #[error("operator is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("target operator is not unitary (max |U^dagger U - 1| = {0:e})")]
    NotUnitary(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-physical state: {0}")]
    NonPhysical(String),

    #[error("integrator error: {0}")]
    Integrator(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("singular perturbation: {0}")]
    SingularPerturbation(String),

    #[error("state identification ambiguous for {label}: max overlap {overlap:.3}")]
    StateIdentification { label: String, overlap: f64 },

    #[error("truncation too small: {0}")]
    Truncation(String),
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Integrator(_)
                | Error::Singular(_)
                | Error::SingularPerturbation(_)
                | Error::StateIdentification { .. }
                | Error::Truncation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
