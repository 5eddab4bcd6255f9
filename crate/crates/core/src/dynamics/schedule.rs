use super::grid::TimeGrid;
use super::lindblad::{check_trace, Liouvillian, RkStepper};
use super::noise::NoiseModel;
use super::{PropagationResult, UnitaryPropagator};
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::router::DetuningSchedule;
use crate::state::{DensityMatrix, StateVector};

/// Constant-Hamiltonian segments: every window, then the static part alone
/// up to `t_final`.
fn segments(static_h: &Operator, schedule: &DetuningSchedule, t_final: f64) -> Result<Vec<(f64, f64, Operator)>> {
    let mut out = Vec::with_capacity(schedule.windows().len() + 1);
    for w in schedule.windows() {
        if w.term.register() != static_h.register() {
            return Err(Error::Label(format!(
                "schedule on {} does not match Hamiltonian on {}",
                w.term.register(),
                static_h.register()
            )));
        }
        out.push((w.t_start, w.t_end, static_h.checked_add(&w.term)?));
    }
    let end = schedule.total_time();
    if t_final > end {
        out.push((end, t_final, static_h.clone()));
    }
    Ok(out)
}

/// Walks the segments from `t_from` to `t_to`, calling `step(segment, span)`.
fn walk(segs: &[(f64, f64, Operator)], t_from: f64, t_to: f64, mut step: impl FnMut(usize, f64) -> Result<()>) -> Result<()> {
    for (k, (a, b, _)) in segs.iter().enumerate() {
        let lo = a.max(t_from);
        let hi = b.min(t_to);
        if hi > lo {
            step(k, hi - lo)?;
        }
    }
    Ok(())
}

/// Noiseless evolution through a piecewise-constant schedule, exact within
/// each window.
pub fn evolve_schedule(
    static_h: &Operator,
    schedule: &DetuningSchedule,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<PropagationResult<StateVector>> {
    if psi0.register() != static_h.register() {
        return Err(Error::Label("initial state and Hamiltonian registers differ".into()));
    }
    let segs = segments(static_h, schedule, grid.t_final())?;
    let props = segs
        .iter()
        .map(|(_, _, h)| UnitaryPropagator::new(h))
        .collect::<Result<Vec<_>>>()?;
    let mut psi = psi0.clone();
    let mut t = 0.0;
    let mut states = Vec::with_capacity(grid.sample_times().len());
    for &s in grid.sample_times() {
        walk(&segs, t, s, |k, span| {
            psi = props[k].apply(span, &psi)?;
            Ok(())
        })?;
        states.push(psi.clone());
        t = s;
    }
    Ok(PropagationResult::new(static_h.register().clone(), grid.sample_times().to_vec(), states))
}

/// Lindblad evolution through a schedule, RK4 within each window.
pub fn evolve_schedule_with_noise(
    static_h: &Operator,
    schedule: &DetuningSchedule,
    rho0: &DensityMatrix,
    noise: &NoiseModel,
    grid: &TimeGrid,
) -> Result<PropagationResult<DensityMatrix>> {
    if rho0.register() != static_h.register() {
        return Err(Error::Label("initial state and Hamiltonian registers differ".into()));
    }
    let segs = segments(static_h, schedule, grid.t_final())?;
    for (_, _, h) in &segs {
        grid.validate_for(h)?;
    }
    let gens = segs
        .iter()
        .map(|(_, _, h)| Liouvillian::new(h, Some(noise)))
        .collect::<Result<Vec<_>>>()?;
    let mut steppers: Vec<RkStepper> = gens.iter().map(|g| RkStepper::new(g, grid)).collect();
    let mut rho = rho0.clone();
    let mut t = 0.0;
    let mut states = Vec::with_capacity(grid.sample_times().len());
    for &s in grid.sample_times() {
        walk(&segs, t, s, |k, span| {
            rho = steppers[k].advance(&rho, span)?;
            Ok(())
        })?;
        check_trace(rho0, &rho, s)?;
        states.push(rho.clone());
        t = s;
    }
    Ok(PropagationResult::new(static_h.register().clone(), grid.sample_times().to_vec(), states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_unitary;
    use crate::router::{concat_schedule, concat_static_hamiltonian, ConcatParams};
    use crate::state::basis_state;

    #[test]
    fn empty_schedule_matches_static_propagation() {
        let p = ConcatParams::with_default_detuning(1, 5.0, 1.0).unwrap();
        let h = concat_static_hamiltonian(&p).unwrap();
        let psi0 = basis_state(h.register(), "1000").unwrap();
        let grid = TimeGrid::uniform(1.0, 0.1, 4).unwrap();
        let a = evolve_schedule(&h, &DetuningSchedule::empty(), &psi0, &grid).unwrap();
        let b = evolve_unitary(&h, &psi0, grid.sample_times()).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            assert!((x.fidelity(y).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noisy_schedule_without_noise_matches_unitary() {
        let p = ConcatParams::with_default_detuning(1, 5.0, 1.0).unwrap();
        let h = concat_static_hamiltonian(&p).unwrap();
        let s = concat_schedule(&p).unwrap();
        let psi0 = basis_state(h.register(), "1000").unwrap();
        let t = s.total_time();
        let mut dt = t / 2000.0;
        for (_, _, seg) in segments(&h, &s, t).unwrap() {
            dt = dt.min(TimeGrid::max_stable_dt(&seg));
        }
        let grid = TimeGrid::uniform(t, dt, 3).unwrap();
        let pure = evolve_schedule(&h, &s, &psi0, &grid).unwrap();
        let mixed = evolve_schedule_with_noise(&h, &s, &psi0.to_density(), &NoiseModel::noiseless(), &grid).unwrap();
        let f = mixed.final_state().overlap(pure.final_state()).unwrap();
        assert!((f - 1.0).abs() < 1e-7, "{f}");
    }
}
