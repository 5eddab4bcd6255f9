//! Simulation of a coherent quantum router built from coupled qubits.
//!
//! The crate covers the full chain from a spin-model description of the
//! router to figures of merit:
//!
//! * [`register`], [`operator`], [`state`]: labelled multi-qubit registers,
//!   embedded Pauli and ladder operators, state vectors and density matrices.
//! * [`router`]: Hamiltonians, detuning schedules and ideal target unitaries
//!   for the two-output, three-output and concatenated routers.
//! * [`dynamics`]: unitary propagation, Lindblad master-equation integration
//!   and piecewise-constant schedule evolution.
//! * [`fidelity`]: channel tomography, average process fidelity, a Haar
//!   Monte-Carlo estimator, routing tables and concurrence.
//! * [`circuit`]: transmon-circuit quantization and extraction of the
//!   effective spin-model couplings.
//!
//! Frequencies are angular and expressed in rad/µs, times in µs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod dynamics;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod operator;
pub mod register;
pub mod router;
pub mod state;
pub mod units;

pub use error::{Error, Result};
pub use operator::{ladder, pauli, Axis, LadderSign, Local, Operator};
pub use register::QubitRegister;
pub use state::{basis_state, partial_trace, DensityMatrix, StateVector};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;
