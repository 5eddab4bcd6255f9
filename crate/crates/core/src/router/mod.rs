//! Hamiltonians, schedules and target unitaries for the router topologies.
//!
//! Each builder has a variant taking an explicit register (`*_on`) which
//! must contain exactly the role labels of that topology, in any order.

mod concat;
mod schedule;
mod three_output;
mod two_output;

pub use concat::{
    bus_label, concat_register, concat_schedule, concat_static_hamiltonian, concat_static_hamiltonian_on,
    control_label, output_label, ConcatParams, CONCAT_MIN_RATIO,
};
pub use schedule::{DetuningSchedule, ScheduleWindow};
pub use three_output::{
    three_output_hamiltonian, three_output_hamiltonian_on, three_output_register,
    ThreeOutputMode, ThreeOutputParams,
};
pub use two_output::{
    ideal_transfer_unitary, rwa_effective_hamiltonian, standard_detunings, transfer_generator,
    two_output_hamiltonian, two_output_hamiltonian_on, two_output_register, TwoOutputParams,
};

use crate::error::{Error, Result};
use crate::operator::{Local, Operator};
use crate::register::QubitRegister;
use crate::C64;

pub const INPUT: &str = "input";
pub const OUTPUT1: &str = "output1";
pub const OUTPUT2: &str = "output2";
pub const OUTPUT3: &str = "output3";
pub const CONTROL: &str = "control";
pub const CONTROL1: &str = "control1";
pub const CONTROL2: &str = "control2";

/// Ratio below which a "much larger than" condition is reported as a warning.
pub const STRONG_INEQUALITY_WARN: f64 = 10.0;

/// Complete-swap time `T = π/(2|J^x|)`.
pub fn transfer_time(jx: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 / jx.abs()
}

pub(crate) fn require_roles(register: &QubitRegister, roles: &[&str]) -> Result<()> {
    if register.len() != roles.len() {
        return Err(Error::Label(format!(
            "register {register} has {} qubits, expected roles {roles:?}",
            register.len()
        )));
    }
    for role in roles {
        if !register.contains(role) {
            return Err(Error::Label(format!("register {register} lacks role '{role}'")));
        }
    }
    Ok(())
}

pub(crate) fn require_finite(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be finite, got {value}")));
    }
    Ok(())
}

pub(crate) fn term(register: &QubitRegister, factors: &[(&str, Local)], coeff: f64) -> Result<Operator> {
    Operator::local_product(register, factors, C64::new(coeff, 0.0))
}

/// `(j/2)(σ^x_a σ^x_b + σ^y_a σ^y_b) = j(σ^+_a σ^−_b + σ^−_a σ^+_b)`.
pub(crate) fn exchange(register: &QubitRegister, a: &str, b: &str, j: f64) -> Result<Operator> {
    Ok(term(register, &[(a, Local::X), (b, Local::X)], j / 2.0)?
        + term(register, &[(a, Local::Y), (b, Local::Y)], j / 2.0)?)
}

/// `Σ_q σ^z_q` over the given labels.
pub fn total_z(register: &QubitRegister, labels: &[&str]) -> Result<Operator> {
    let mut acc = Operator::zeros(register);
    for l in labels {
        acc += &term(register, &[(l, Local::Z)], 1.0)?;
    }
    Ok(acc)
}
