//! Dense linear-algebra helpers shared by the propagators.
//!
//! Router Hamiltonians conserve excitation number and the master equation
//! only couples coherences with equal excitation difference, so both split
//! into independent blocks. Every routine here works block by block.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::C64;

/// Entries with magnitude at or below this are treated as structural zeros.
pub const PATTERN_TOL: f64 = 0.0;

/// Groups `0..n` into connected components of the undirected graph given
/// by `edges`. Components are ordered by their smallest index and each
/// component is sorted ascending.
pub fn connected_blocks(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// Connected blocks of the nonzero pattern of a square matrix.
pub fn matrix_blocks(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let edges = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && m[(i, j)].norm() > PATTERN_TOL);
    connected_blocks(n, edges)
}

/// Submatrix on `rows × cols`.
pub fn submatrix(m: &DMatrix<C64>, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(rows.len(), cols.len(), |a, b| m[(rows[a], cols[b])])
}

/// Writes `block` into `target` at `indices × indices`.
pub fn scatter(target: &mut DMatrix<C64>, indices: &[usize], block: &DMatrix<C64>) {
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            target[(i, j)] = block[(a, b)];
        }
    }
}

#[derive(Debug, Clone)]
struct EigenBlock {
    indices: Vec<usize>,
    values: DVector<f64>,
    vectors: DMatrix<C64>,
}

/// Eigendecomposition of a Hermitian matrix, computed per connected block.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    dim: usize,
    blocks: Vec<EigenBlock>,
}

impl HermitianSpectrum {
    /// Decomposes `h`, which must already be known to be Hermitian.
    pub fn new(h: &DMatrix<C64>) -> Self {
        let blocks = matrix_blocks(h)
            .into_iter()
            .map(|indices| {
                let sub = submatrix(h, &indices, &indices);
                let sub = (&sub + sub.adjoint()) * C64::new(0.5, 0.0);
                let eig = SymmetricEigen::new(sub);
                EigenBlock {
                    indices,
                    values: eig.eigenvalues,
                    vectors: eig.eigenvectors,
                }
            })
            .collect();
        Self {
            dim: h.nrows(),
            blocks,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Sizes of the independent blocks.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.indices.len()).collect()
    }

    /// `exp(−i h t)`.
    pub fn propagator(&self, t: f64) -> DMatrix<C64> {
        let mut u = DMatrix::zeros(self.dim, self.dim);
        for b in &self.blocks {
            let phases = b.values.map(|e| C64::from_polar(1.0, -e * t));
            let mut scaled = b.vectors.clone();
            for (k, mut col) in scaled.column_iter_mut().enumerate() {
                col *= phases[k];
            }
            scatter(&mut u, &b.indices, &(scaled * b.vectors.adjoint()));
        }
        u
    }

    /// `exp(−i h t) ψ` without forming the full propagator.
    pub fn apply(&self, t: f64, psi: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        for b in &self.blocks {
            let local = DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&i| psi[i]));
            let mut coeffs = b.vectors.adjoint() * local;
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c *= C64::from_polar(1.0, -b.values[k] * t);
            }
            let back = &b.vectors * coeffs;
            for (a, &i) in b.indices.iter().enumerate() {
                out[i] = back[a];
            }
        }
        out
    }
}

/// Square matrix stored as independent diagonal blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    dim: usize,
    blocks: Vec<(Vec<usize>, DMatrix<C64>)>,
}

impl BlockMatrix {
    pub fn new(dim: usize, blocks: Vec<(Vec<usize>, DMatrix<C64>)>) -> Self {
        Self { dim, blocks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[(Vec<usize>, DMatrix<C64>)] {
        &self.blocks
    }

    /// Applies `f` to every block.
    pub fn map_blocks(&self, f: impl Fn(&DMatrix<C64>) -> DMatrix<C64>) -> Self {
        Self {
            dim: self.dim,
            blocks: self
                .blocks
                .iter()
                .map(|(idx, m)| (idx.clone(), f(m)))
                .collect(),
        }
    }

    /// Block-wise product; both operands must share the block structure.
    pub fn compose(&self, other: &BlockMatrix) -> Self {
        Self {
            dim: self.dim,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|((idx, a), (_, b))| (idx.clone(), a * b))
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        for (idx, m) in &self.blocks {
            let local = DVector::from_iterator(idx.len(), idx.iter().map(|&i| v[i]));
            let res = m * local;
            for (a, &i) in idx.iter().enumerate() {
                out[i] = res[a];
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (idx, m) in &self.blocks {
            scatter(&mut out, idx, m);
        }
        out
    }
}

/// Fixed-step RK4 update matrix `Σ_{k≤4} (hA)^k / k!` for `ẋ = A x`.
pub fn rk4_step_matrix(a: &DMatrix<C64>, h: f64) -> DMatrix<C64> {
    let ha = a * C64::new(h, 0.0);
    let mut out = DMatrix::identity(a.nrows(), a.ncols());
    let mut term = out.clone();
    for k in 1..=4 {
        term = &term * &ha * C64::new(1.0 / k as f64, 0.0);
        out += &term;
    }
    out
}

/// Maximizer of a unimodal `f` on `[a, b]` by golden-section search,
/// stopping once the bracket is shorter than `tol`.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}
