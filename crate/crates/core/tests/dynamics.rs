use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use proptest::prelude::*;
use qrouter::dynamics::{evolve_lindblad, evolve_unitary, DephasingConvention, Liouvillian, NoiseModel, TimeGrid};
use qrouter::router::{two_output_hamiltonian, TwoOutputParams};
use qrouter::{basis_state, DensityMatrix, StateVector, C64};

fn router(ratio: f64) -> TwoOutputParams {
    TwoOutputParams::from_ratio(2.0 * PI * 10.0, ratio).unwrap()
}

fn random_state(re: &[f64], im: &[f64]) -> StateVector {
    let reg = qrouter::router::two_output_register();
    let amps = nalgebra::DVector::from_iterator(16, re.iter().zip(im).map(|(a, b)| C64::new(*a, *b)));
    StateVector::normalized(reg, amps).unwrap()
}

fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lindblad_evolution_is_linear(
        re in proptest::collection::vec(-1.0f64..1.0, 32),
        im in proptest::collection::vec(-1.0f64..1.0, 32),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let p = router(4.0);
        let h = two_output_hamiltonian(&p).unwrap();
        let noise = NoiseModel::uniform(20.0, 15.0).unwrap();
        let grid = TimeGrid::for_hamiltonian(&h, 0.05, 1).unwrap();
        let r1 = random_state(&re[..16], &im[..16]).to_density();
        let r2 = random_state(&re[16..], &im[16..]).to_density();
        let mix = r1.matrix() * C64::new(a, 0.0) + r2.matrix() * C64::new(b, 0.0);
        let carrier = DensityMatrix::carrier(h.register().clone(), mix).unwrap();
        let evolve = |rho: &DensityMatrix| {
            evolve_lindblad(&h, rho, Some(&noise), &grid).unwrap().final_state().matrix().clone()
        };
        let lhs = evolve(&carrier);
        let rhs = evolve(&r1) * C64::new(a, 0.0) + evolve(&r2) * C64::new(b, 0.0);
        prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn noisy_evolution_stays_physical(
        re in proptest::collection::vec(-1.0f64..1.0, 16),
        im in proptest::collection::vec(-1.0f64..1.0, 16),
        t1 in 5.0f64..50.0,
        t2_frac in 0.1f64..2.0,
        pure in any::<bool>(),
    ) {
        let p = router(3.0);
        let h = two_output_hamiltonian(&p).unwrap();
        let convention = if pure { DephasingConvention::PureDephasing } else { DephasingConvention::TotalCoherence };
        let noise = NoiseModel::uniform(t1, t1 * t2_frac).unwrap().with_convention(convention).unwrap();
        let grid = TimeGrid::for_hamiltonian(&h, 0.2, 3).unwrap();
        let res = evolve_lindblad(&h, &random_state(&re, &im).to_density(), Some(&noise), &grid).unwrap();
        for rho in &res.states {
            prop_assert!(rho.is_physical());
            prop_assert!((rho.trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn noiseless_lindblad_matches_unitary_evolution(
        re in proptest::collection::vec(-1.0f64..1.0, 16),
        im in proptest::collection::vec(-1.0f64..1.0, 16),
        ratio in 1.0f64..12.0,
    ) {
        let p = router(ratio);
        let h = two_output_hamiltonian(&p).unwrap();
        let psi = random_state(&re, &im);
        let t = p.transfer_time();
        let grid = TimeGrid::for_hamiltonian(&h, t, 4).unwrap();
        let open = evolve_lindblad(&h, &psi.to_density(), None, &grid).unwrap();
        let closed = evolve_unitary(&h, &psi, grid.sample_times()).unwrap();
        for (rho, phi) in open.states.iter().zip(&closed.states) {
            let d = max_diff(rho.matrix(), phi.to_density().matrix());
            prop_assert!(d < 1e-6, "{d:e}");
        }
    }
}

#[test]
fn halving_the_step_converges_at_fourth_order() {
    let p = router(4.192);
    let h = two_output_hamiltonian(&p).unwrap();
    let noise = NoiseModel::uniform(30.0, 30.0).unwrap();
    let l = Liouvillian::new(&h, Some(&noise)).unwrap();
    let t = p.transfer_time();
    let exact = l.exact_map(t).to_dense();
    let err = |steps: u32| max_diff(&l.rk4_map(t / steps as f64, steps).to_dense(), &exact);
    let (coarse, fine) = (err(400), err(800));
    assert!(coarse < 1e-5, "{coarse}");
    let order = (coarse / fine).log2();
    assert!((3.5..4.5).contains(&order), "observed order {order}");
}

#[test]
fn default_grid_tracks_the_exact_exponential() {
    let p = router(4.192);
    let h = two_output_hamiltonian(&p).unwrap();
    let noise = NoiseModel::uniform(30.0, 30.0).unwrap();
    let t = p.transfer_time();
    let grid = TimeGrid::for_hamiltonian(&h, t, 1).unwrap();
    let psi = basis_state(h.register(), "1001").unwrap().to_density();
    let rk = evolve_lindblad(&h, &psi, Some(&noise), &grid).unwrap();
    let exact = Liouvillian::new(&h, Some(&noise)).unwrap().exact_map(t).apply(&psi).unwrap();
    assert!(max_diff(rk.final_state().matrix(), exact.matrix()) < 1e-9);
}

#[test]
fn excitation_number_decays_at_the_relaxation_rate() {
    // H conserves excitations and every qubit relaxes at 1/T1, so
    // d⟨N⟩/dt = −⟨N⟩/T1 regardless of the coherent dynamics.
    let p = router(2.5);
    let h = two_output_hamiltonian(&p).unwrap();
    let t1 = 7.0;
    let noise = NoiseModel::uniform(t1, 4.0).unwrap();
    let t = 3.0 * p.transfer_time();
    let grid = TimeGrid::for_hamiltonian(&h, t, 5).unwrap();
    let psi = basis_state(h.register(), "1001").unwrap().to_density();
    let res = evolve_lindblad(&h, &psi, Some(&noise), &grid).unwrap();
    for (time, pops) in res.times.iter().zip(&res.populations) {
        let n: f64 = pops.iter().sum();
        assert_abs_diff_eq!(n, 2.0 * (-time / t1).exp(), epsilon = 1e-9);
    }
}
