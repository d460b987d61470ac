//! Empirical growth order of an energy near the rest configuration:
//! minimize `E(q) - E(p)` over spheres `|q - p| = r` and fit the slope of
//! `log m(r)` against `log r`.
//!
//! Double precision limits reliable slopes to about `s <= 10`; the fit is a
//! cross-check for the ladder, not an oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{energy_at_displacement, EnergySpec};
use crate::error::{Result, RigidityError};
use crate::framework::PinnedFramework;
use crate::linalg;
use crate::rigidity::decompose;
use crate::sphere::{self, DescentOptions};

pub const DEFAULT_R_MIN: f64 = 1e-3;
pub const DEFAULT_R_MAX: f64 = 1e-1;
pub const DEFAULT_N_RADII: usize = 12;
pub const DEFAULT_STARTS: usize = 64;

/// Half the shortest edge length of the pinned configuration.
pub fn safe_radius(pf: &PinnedFramework) -> f64 {
    pf.framework().edge_lengths().into_iter().fold(f64::INFINITY, f64::min) * 0.5
}

/// Best value of `E(q) - E(p)` found on `|q - p| = r` (an upper bound on
/// the true minimum). Starts run along `+-` each flex direction, then at
/// random points, `n_starts` in total.
pub fn min_energy_on_sphere(spec: &EnergySpec, pf: &PinnedFramework, r: f64, n_starts: usize, seed: u64) -> Result<f64> {
    let safe = safe_radius(pf);
    if !(r > 0.0) || r > safe {
        return Err(RigidityError::RadiusTooLarge { radius: r, safe });
    }
    let n = pf.n_free();
    if n == 0 {
        return Err(RigidityError::InvalidArgument("framework has no free coordinates".into()));
    }
    let (_, kd) = decompose(pf);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for j in 0..kd.dim_k {
        let k = linalg::column(&kd.k_basis, j);
        starts.push(k.clone());
        starts.push(linalg::scaled(-1.0, &k));
    }
    starts.truncate(n_starts.max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < n_starts.max(1) {
        starts.push(sphere::random_unit(&mut rng, n));
    }
    let mut failure = None;
    let mut fg = |z: &[f64]| match energy_at_displacement(spec, pf, z, false) {
        Ok(ev) => (ev.gap, ev.gradient),
        Err(e) => {
            failure = Some(e);
            (f64::NAN, vec![0.0; z.len()])
        }
    };
    let opts = DescentOptions {
        max_iter: 3000,
        grad_tol: 1e-12,
        f_scale: 0.0,
    };
    let mut best = f64::INFINITY;
    for s in &starts {
        let m = sphere::minimize_on_sphere(&mut fg, s, r, opts);
        if m.value < best {
            best = m.value;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub radii: Vec<f64>,
    pub m_values: Vec<f64>,
    /// Least-squares slope of `log m` against `log r`.
    pub fitted_s: f64,
    pub intercept: f64,
    pub r2: f64,
    /// `fitted_s / 2`
    pub nu_hat: f64,
    /// Whether `m(r)` is non-decreasing over the grid.
    pub monotone: bool,
}

/// Geometric grid of `n` radii from `r_min` to `r_max`.
pub fn geometric_radii(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![r_min];
    }
    let ratio = (r_max / r_min).ln() / (n - 1) as f64;
    (0..n).map(|i| r_min * (ratio * i as f64).exp()).collect()
}

/// Fits the growth exponent `s` of `m(r) ~ C r^s`.
pub fn fit_growth_order(
    spec: &EnergySpec,
    pf: &PinnedFramework,
    r_min: f64,
    r_max: f64,
    n_radii: usize,
    n_starts: usize,
    seed: u64,
) -> Result<GrowthFit> {
    if !(r_min > 0.0 && r_min < r_max) {
        return Err(RigidityError::InvalidArgument(format!(
            "need 0 < r_min < r_max, got {r_min} and {r_max}"
        )));
    }
    if n_radii < 2 {
        return Err(RigidityError::InvalidArgument("need at least two radii".into()));
    }
    let safe = safe_radius(pf);
    if r_max > safe {
        return Err(RigidityError::RadiusTooLarge { radius: r_max, safe });
    }
    let radii = geometric_radii(r_min, r_max, n_radii);
    let mut m_values = Vec::with_capacity(n_radii);
    for (i, &r) in radii.iter().enumerate() {
        let m = min_energy_on_sphere(spec, pf, r, n_starts, seed.wrapping_add(i as u64))?;
        if !(m > 0.0) {
            return Err(RigidityError::DegenerateFit { radius: r, value: m });
        }
        m_values.push(m);
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = m_values.iter().map(|m| m.ln()).collect();
    let (slope, intercept, r2) = least_squares_line(&xs, &ys);
    let monotone = m_values.windows(2).all(|w| w[1] >= w[0]);
    Ok(GrowthFit {
        radii,
        m_values,
        fitted_s: slope,
        intercept,
        r2,
        nu_hat: slope / 2.0,
        monotone,
    })
}

/// Slope, intercept and coefficient of determination.
pub fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{rest_hessian, EnergyFamily};
    use crate::framework::{pin, Framework, DEFAULT_RANK_TOL};

    fn pinned(points: Vec<Vec<f64>>, edges: &[(usize, usize)]) -> PinnedFramework {
        let f = Framework::new(points[0].len(), points, edges.iter().copied(), None).unwrap();
        pin(&f, DEFAULT_RANK_TOL).unwrap().0
    }

    #[test]
    fn line_fit() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [1.0, 3.0, 5.0];
        let (s, b, r2) = least_squares_line(&xs, &ys);
        assert!((s - 2.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15 && (r2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_matches_quadratic_model() {
        let pf = pinned(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 1.0]], &[(0, 1), (1, 2), (0, 2)]);
        let spec = EnergySpec::new(EnergyFamily::Harmonic, pf.framework());
        let h = rest_hessian(&spec, &pf).unwrap();
        let lmin = nalgebra::SymmetricEigen::new(h).eigenvalues.min();
        let r = 1e-3;
        let m = min_energy_on_sphere(&spec, &pf, r, 16, 0).unwrap();
        let model = 0.5 * lmin * r * r;
        assert!((m - model).abs() < 0.1 * model, "{m} vs {model}");
    }

    #[test]
    fn radius_is_limited() {
        let pf = pinned(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 1.0]], &[(0, 1), (1, 2), (0, 2)]);
        let spec = EnergySpec::new(EnergyFamily::Harmonic, pf.framework());
        assert!(matches!(
            min_energy_on_sphere(&spec, &pf, 0.6, 4, 0),
            Err(RigidityError::RadiusTooLarge { .. })
        ));
    }
}
