use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::register::QubitRegister;
use crate::state::{partial_trace, DensityMatrix};
use crate::C64;

/// Label of the which-path qubit built by [`which_path_state`].
pub const PATH: &str = "path";

/// Wootters concurrence of a physical two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.register().len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho.register().len(),
        });
    }
    rho.validate_physical()?;
    let m = rho.matrix();
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    // σ^y ⊗ σ^y
    let yy = DMatrix::from_row_slice(4, 4, &[o, o, o, -l, o, o, l, o, o, l, o, o, -l, o, o, o]);
    let tilde = &yy * m.conjugate() * &yy;
    let sqrt_rho = hermitian_sqrt(m);
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let r = (&r + r.adjoint()) * C64::new(0.5, 0.0);
    let mut lambdas: Vec<f64> = SymmetricEigen::new(r)
        .eigenvalues
        .iter()
        .map(|&e| e.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

fn hermitian_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut v = eig.eigenvectors.clone();
    for (k, mut col) in v.column_iter_mut().enumerate() {
        col *= C64::new(eig.eigenvalues[k].max(0.0).sqrt(), 0.0);
    }
    v * eig.eigenvectors.adjoint()
}

/// Two-qubit state of `(control, path)` where the path qubit is `|0⟩` when
/// the excitation sits in `output_a` and `|1⟩` when it sits in `output_b`.
/// Weight outside those two single-excitation configurations is discarded;
/// the retained weight is returned alongside the normalized state.
pub fn which_path_state(
    rho: &DensityMatrix,
    output_a: &str,
    output_b: &str,
    control: &str,
) -> Result<(DensityMatrix, f64)> {
    let red = partial_trace(rho, &[output_a, output_b, control])?;
    let reg = red.register();
    let index = |path: usize, c: usize| -> Result<usize> {
        let (a, b) = if path == 0 { (1, 0) } else { (0, 1) };
        let mut idx = 0usize;
        for (label, bit) in [(output_a, a), (output_b, b), (control, c)] {
            idx |= bit << reg.shift_of(label)?;
        }
        Ok(idx)
    };
    let mut out = DMatrix::zeros(4, 4);
    for c in 0..2 {
        for p in 0..2 {
            for c2 in 0..2 {
                for p2 in 0..2 {
                    out[(2 * c + p, 2 * c2 + p2)] = red.matrix()[(index(p, c)?, index(p2, c2)?)];
                }
            }
        }
    }
    let weight = out.trace().re;
    if weight <= 1e-12 {
        return Err(Error::NonPhysical("no weight in the which-path subspace".into()));
    }
    let two = QubitRegister::new([control, PATH])?;
    Ok((DensityMatrix::new(two, out.unscale(weight))?, weight))
}
