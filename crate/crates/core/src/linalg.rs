//! Thin helpers over nalgebra's SVD.

use nalgebra::{DMatrix, DVector};

/// Singular values of `m` (descending). Empty for empty matrices.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol * sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&max) if max > 0.0 => s.iter().filter(|&&x| x > tol * max).count(),
        _ => 0,
    }
}

/// Full right-singular decomposition of an `r x c` matrix.
///
/// Returns `(sigma, v)` with `v` a `c x c` orthogonal matrix whose first
/// `min(r, c)` columns pair with `sigma` (descending); remaining columns
/// span the rest of `R^c` (all in the null space).
pub fn right_singular(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let c = m.ncols();
    if c == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    // eigen-decomposition of the Gram matrix would square the condition
    // number; pad with zero rows so that the thin SVD of the padded matrix
    // yields a full V.
    let rows = m.nrows().max(c);
    let mut padded = DMatrix::zeros(rows, c);
    padded.view_mut((0, 0), (m.nrows(), c)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let sorted_sigma: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    let v = DMatrix::from_fn(c, c, |r, k| vt[(order[k], r)]);
    let keep = m.nrows().min(c);
    (sorted_sigma[..keep].to_vec(), v)
}

/// Minimum-norm least-squares solution `x = A^+ b`, with singular values
/// below `tol * sigma_max` treated as zero.
pub struct PseudoInverse {
    u: DMatrix<f64>,
    sigma: Vec<f64>,
    v: DMatrix<f64>,
    cutoff: f64,
}

impl PseudoInverse {
    pub fn new(a: &DMatrix<f64>, tol: f64) -> Self {
        let svd = a.clone().svd(true, true);
        let u = svd.u.expect("requested U");
        let v = svd.v_t.expect("requested V^T").transpose();
        let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
        let max = sigma.iter().copied().fold(0.0, f64::max);
        Self {
            u,
            sigma,
            v,
            cutoff: tol * max,
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let b = DVector::from_column_slice(b);
        let mut coef = self.u.transpose() * b;
        for (c, s) in coef.iter_mut().zip(&self.sigma) {
            *c = if *s > self.cutoff { *c / s } else { 0.0 };
        }
        (&self.v * coef).iter().copied().collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scaled(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| alpha * v).collect()
}

pub fn column(m: &DMatrix<f64>, j: usize) -> Vec<f64> {
    m.column(j).iter().copied().collect()
}

/// `sum_j coef[j] * basis[:, j]`
pub fn combine(basis: &DMatrix<f64>, coef: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; basis.nrows()];
    for (j, c) in coef.iter().enumerate() {
        for (i, o) in out.iter_mut().enumerate() {
            *o += c * basis[(i, j)];
        }
    }
    out
}

/// Sine of the largest principal angle between the column spans of two
/// matrices with orthonormal columns of equal count.
pub fn subspace_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let resid = b - a * (a.transpose() * b);
    singular_values(&resid).first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_pinv() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        assert_eq!(numerical_rank(&a, 1e-9), 1);
        let p = PseudoInverse::new(&a, 1e-9);
        let x = p.solve(&[1.0, 2.0, 3.0]);
        // minimum norm solution lies along (1, 2)
        assert!((x[1] - 2.0 * x[0]).abs() < 1e-12);
        assert!((x[0] + 2.0 * x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn right_singular_completes_basis() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let (s, v) = right_singular(&a);
        assert_eq!(s.len(), 1);
        assert!((s[0] - 1.0).abs() < 1e-15);
        let vtv = v.transpose() * &v;
        assert!((vtv - DMatrix::<f64>::identity(3, 3)).amax() < 1e-14);
        assert!(v[(0, 0)].abs() > 1.0 - 1e-14);
    }
}
