//! Rigidity matrix and the first-order flex space.

use nalgebra::DMatrix;

use crate::framework::{PinnedFramework, DEFAULT_RANK_TOL};
use crate::linalg;

/// Pinned rigidity matrix `R(p)`: one row per edge, one column per free
/// coordinate. Row `vw` holds `p_v - p_w` in the free columns of `v` and
/// `p_w - p_v` in those of `w` (the factor 2 of `d/dt m` is dropped).
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityMatrix {
    pub matrix: DMatrix<f64>,
}

impl RigidityMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.matrix * nalgebra::DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    pub fn norm(&self) -> f64 {
        linalg::singular_values(&self.matrix)
            .first()
            .copied()
            .unwrap_or(0.0)
    }
}

pub fn rigidity_matrix(pf: &PinnedFramework) -> RigidityMatrix {
    let edges = pf.edges();
    let mut m = DMatrix::zeros(edges.len(), pf.n_free());
    for (row, &e) in edges.iter().enumerate() {
        let diff = pf.edge_vector(e);
        for (axis, &delta) in diff.iter().enumerate() {
            if let Some(c) = pf.free_index(e.0, axis) {
                m[(row, c)] += delta;
            }
            if let Some(c) = pf.free_index(e.1, axis) {
                m[(row, c)] -= delta;
            }
        }
    }
    RigidityMatrix { matrix: m }
}

/// Orthonormal bases of `K = ker R` and its orthogonal complement.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDecomposition {
    pub k_basis: DMatrix<f64>,
    pub kbar_basis: DMatrix<f64>,
    pub dim_k: usize,
    /// Singular values of `R`, descending.
    pub singular_values: Vec<f64>,
}

impl KernelDecomposition {
    pub fn n(&self) -> usize {
        self.k_basis.nrows()
    }

    /// Orthogonal projection of `x` onto `K`.
    pub fn project_k(&self, x: &[f64]) -> Vec<f64> {
        let coef: Vec<f64> = (0..self.dim_k)
            .map(|j| linalg::dot(&linalg::column(&self.k_basis, j), x))
            .collect();
        linalg::combine(&self.k_basis, &coef)
    }

    /// Smallest singular value counted as nonzero and largest counted as
    /// zero, for auditing the rank decision.
    pub fn rank_gap(&self) -> (Option<f64>, Option<f64>) {
        let rank = self.n() - self.dim_k;
        let kept = rank.checked_sub(1).and_then(|i| self.singular_values.get(i).copied());
        let dropped = self.singular_values.get(rank).copied();
        (kept, dropped)
    }
}

/// SVD-based split of `R^N` into the numerical kernel of `R` (singular
/// values `<= tol * sigma_max`) and its orthogonal complement.
pub fn kernel_decomposition(r: &RigidityMatrix, tol: f64) -> KernelDecomposition {
    let n = r.cols();
    let (sigma, v) = linalg::right_singular(&r.matrix);
    let max = sigma.first().copied().unwrap_or(0.0);
    let rank = if max > 0.0 {
        sigma.iter().filter(|&&s| s > tol * max).count()
    } else {
        0
    };
    let kbar_basis = v.columns(0, rank).into_owned();
    let k_basis = v.columns(rank, n - rank).into_owned();
    KernelDecomposition {
        k_basis,
        kbar_basis,
        dim_k: n - rank,
        singular_values: sigma,
    }
}

/// Rigidity matrix and kernel split with the default rank tolerance.
pub fn decompose(pf: &PinnedFramework) -> (RigidityMatrix, KernelDecomposition) {
    let r = rigidity_matrix(pf);
    let kd = kernel_decomposition(&r, DEFAULT_RANK_TOL);
    (r, kd)
}

/// True iff the pinned framework has no nonzero first-order flex.
pub fn first_order_rigid(pf: &PinnedFramework) -> bool {
    decompose(pf).1.dim_k == 0
}
