use nalgebra::DMatrix;

use super::{channel_tomography, average_process_fidelity, ChannelOnSubspace, FramedMap, SubspaceBasis};
use crate::dynamics::{Liouvillian, NoiseModel, Superoperator, TimeGrid};
use crate::error::Result;
use crate::operator::Operator;
use crate::router::{ideal_transfer_unitary, two_output_hamiltonian, two_output_register, TwoOutputParams};
use crate::C64;

/// How the master equation is integrated for a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Fixed-step RK4 with the default grid.
    #[default]
    Rk4,
    /// Dense exponential of each generator block.
    ExactExponential,
}

/// `{|0,00,0⟩, |1,00,0⟩, |0,00,1⟩, |1,00,1⟩}`: input and control free,
/// outputs empty.
pub fn two_output_subspace() -> SubspaceBasis {
    SubspaceBasis::from_bits(&two_output_register(), &["0000", "1000", "0001", "1001"])
        .expect("static basis is valid")
}

/// `exp(+i diag(H) t)`, which removes the phases accumulated under the
/// diagonal part of `h`.
pub fn frame_alignment(h: &Operator, t: f64) -> DMatrix<C64> {
    let phases: Vec<C64> = h.real_diagonal().iter().map(|e| C64::from_polar(1.0, e * t)).collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases))
}

/// Router evolution over `t`, followed by frame alignment.
pub fn two_output_map(
    p: &TwoOutputParams,
    noise: Option<&NoiseModel>,
    t: f64,
    integrator: Integrator,
) -> Result<FramedMap<Superoperator>> {
    let h = two_output_hamiltonian(p)?;
    let l = Liouvillian::new(&h, noise)?;
    let map = match integrator {
        Integrator::Rk4 => {
            let grid = TimeGrid::for_hamiltonian(&h, t, 1)?;
            let steps = grid.steps_for(t).max(1);
            l.rk4_map(t / steps as f64, steps)
        }
        Integrator::ExactExponential => l.exact_map(t),
    };
    FramedMap::new(map, frame_alignment(&h, t))
}

/// Channel of the router at its transfer time `T = π/(2J^x)`.
pub fn two_output_channel(
    p: &TwoOutputParams,
    noise: Option<&NoiseModel>,
    integrator: Integrator,
) -> Result<ChannelOnSubspace> {
    let t = p.transfer_time();
    let map = two_output_map(p, noise, t, integrator)?;
    let mut ch = channel_tomography(&map, &two_output_subspace())?;
    ch.metadata.insert("t_us".into(), format!("{t:e}"));
    ch.metadata.insert("frame".into(), "exp(+i diag(H) t)".into());
    ch.metadata.insert("integrator".into(), format!("{integrator:?}"));
    ch.metadata.insert(
        "dephasing".into(),
        noise.map_or("none".into(), |n| format!("{:?}", n.convention())),
    );
    Ok(ch)
}

/// Average process fidelity of the router against the ideal routing unitary.
pub fn two_output_fidelity(p: &TwoOutputParams, noise: Option<&NoiseModel>) -> Result<f64> {
    let ch = two_output_channel(p, noise, Integrator::Rk4)?;
    average_process_fidelity(&ch, &ideal_transfer_unitary())
}
