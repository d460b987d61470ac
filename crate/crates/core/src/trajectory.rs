//! Polynomial trajectories `p(t) = p + sum_i c_i t^i` in pinned coordinates.

use serde::{Deserialize, Serialize};

use crate::framework::PinnedFramework;
use crate::jet::{factorial, Jet};
use crate::linalg;

/// Coefficients `c_1, c_2, ...` of a polynomial displacement, stored as
/// Taylor coefficients: `c_i = p^{(i)}(0) / i!`. The base point is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTrajectory {
    pub coeffs: Vec<Vec<f64>>,
}

impl PolyTrajectory {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Self {
        Self { coeffs }
    }

    /// Builds the trajectory from derivatives `p', p'', ...`.
    pub fn from_derivatives(derivs: &[Vec<f64>]) -> Self {
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(i, d)| linalg::scaled(1.0 / factorial(i + 1), d))
            .collect();
        Self { coeffs }
    }

    /// The straight line `t -> p + v t`.
    pub fn linear(v: Vec<f64>) -> Self {
        Self { coeffs: vec![v] }
    }

    /// Derivatives `p^{(i)}(0)` for `i = 1..=degree`.
    pub fn derivatives(&self) -> Vec<Vec<f64>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| linalg::scaled(factorial(i + 1), c))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Length of each coefficient vector (0 for the empty trajectory).
    pub fn n(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    /// Coefficient of `t^i` (`i >= 1`), or zeros past the degree.
    pub fn coeff(&self, i: usize) -> Vec<f64> {
        match i.checked_sub(1).and_then(|k| self.coeffs.get(k)) {
            Some(c) => c.clone(),
            None => vec![0.0; self.n()],
        }
    }

    /// Displacement `sum_i c_i t^i`.
    pub fn displacement(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        for c in self.coeffs.iter().rev() {
            for (o, ci) in out.iter_mut().zip(c) {
                *o = *o * t + ci;
            }
        }
        linalg::scaled(t, &out)
    }

    /// First `k` coefficients.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().take(k).cloned().collect(),
        }
    }

    /// Reparameterization `t -> t^j`.
    pub fn reparameterized(&self, j: usize) -> Self {
        assert!(j >= 1, "reparameterization power must be positive");
        let n = self.n();
        let mut coeffs = vec![vec![0.0; n]; self.degree() * j];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + 1) * j - 1] = c.clone();
        }
        Self { coeffs }
    }

    /// Norm of each coefficient.
    pub fn coeff_norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| linalg::norm(c)).collect()
    }

    /// Jet of free coordinate `i` of the displacement.
    pub fn coordinate_jet(&self, i: usize, order: usize) -> Jet {
        let mut c = vec![0.0; order + 1];
        for (k, coeff) in self.coeffs.iter().enumerate().take(order) {
            c[k + 1] = coeff[i];
        }
        Jet::from_coeffs(&c, order)
    }
}

/// Per-edge jets of `m_e(p(t)) - m_e(p)` along a polynomial displacement,
/// assembled from the coefficients directly:
/// `dm_n = 2 (p_v - p_w).D_n + sum_{a+b=n} D_a.D_b`, `D_i = c_{i,v} - c_{i,w}`.
/// The constant term is exactly zero.
pub fn edge_sq_length_jets(pf: &PinnedFramework, traj: &PolyTrajectory, order: usize) -> Vec<Jet> {
    assert!(
        traj.degree() == 0 || traj.n() == pf.n_free(),
        "trajectory length does not match the free coordinates"
    );
    pf.edges()
        .iter()
        .map(|&e| {
            let base = pf.edge_vector(e);
            let diffs: Vec<Vec<f64>> = (1..=order.min(traj.degree()))
                .map(|i| pf.edge_difference(&traj.coeffs[i - 1], e))
                .collect();
            let mut c = vec![0.0; order + 1];
            let mut mag = vec![0.0; order + 1];
            for n in 1..=order {
                if let Some(dn) = diffs.get(n - 1) {
                    c[n] += 2.0 * linalg::dot(&base, dn);
                    mag[n] += 2.0 * abs_dot(&base, dn);
                }
                for a in 1..n {
                    if let (Some(da), Some(db)) = (diffs.get(a - 1), diffs.get(n - a - 1)) {
                        c[n] += linalg::dot(da, db);
                        mag[n] += abs_dot(da, db);
                    }
                }
            }
            Jet::from_parts(c, mag)
        })
        .collect()
}

fn abs_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x * y).abs()).sum()
}
