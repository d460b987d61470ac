//! Classification of degenerate critical points by fourth (and `2k`-th)
//! order coefficients along indicative trajectory families.
//!
//! With the Hessian kernel spanned by the `y` coordinates and its
//! complement by `x`, the family `q(t) = x0 t^2 + y0 t` over the unit sphere
//! `|x0|^2 + |y0|^2 = 1` decides the critical point whenever the `t^4`
//! coefficient `a4(x0, y0)` has a definite sign on the sphere.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{energy_along_trajectory, energy_at_displacement, rest_hessian, EnergySpec};
use crate::error::{Result, RigidityError};
use crate::framework::PinnedFramework;
use crate::jet::Jet;
use crate::linalg;
use crate::poly::Polynomial;
use crate::rigidity::{decompose, rigidity_matrix, KernelDecomposition};
use crate::sphere::{self, DescentOptions};
use crate::trajectory::PolyTrajectory;

pub const DEFAULT_CRIT_TOL: f64 = 1e-8;
pub const DEFAULT_STARTS: usize = 64;
/// Quasi-random samples used when the parameter sphere is small.
pub const DENSE_SAMPLES: usize = 4096;
const DENSE_MAX_DIM: usize = 4;
/// Grid over `y0 in [-1, 1]` for the order-`2k` family.
pub const Y0_GRID: usize = 2048;
const SEED: u64 = 0x0c7a_11ce;

/// A function with a critical point at the origin.
#[derive(Debug, Clone)]
pub enum AnalyticTarget {
    Polynomial(Polynomial),
    /// `f(dp) = E(p + dp) - E(p)` in pinned coordinates.
    FrameworkEnergy { spec: EnergySpec, pf: PinnedFramework },
}

impl AnalyticTarget {
    pub fn n_vars(&self) -> usize {
        match self {
            AnalyticTarget::Polynomial(p) => p.n_vars(),
            AnalyticTarget::FrameworkEnergy { pf, .. } => pf.n_free(),
        }
    }

    pub fn gradient_at_origin(&self) -> Result<Vec<f64>> {
        match self {
            AnalyticTarget::Polynomial(p) => Ok(p.gradient_at_origin()),
            AnalyticTarget::FrameworkEnergy { spec, pf } => {
                Ok(energy_at_displacement(spec, pf, &vec![0.0; pf.n_free()], false)?.gradient)
            }
        }
    }

    pub fn hessian_at_origin(&self) -> Result<DMatrix<f64>> {
        match self {
            AnalyticTarget::Polynomial(p) => Ok(p.hessian_at_origin()),
            AnalyticTarget::FrameworkEnergy { spec, pf } => rest_hessian(spec, pf),
        }
    }

    /// Taylor coefficients of `t -> f(traj(t)) - f(0)`.
    pub fn jet(&self, traj: &PolyTrajectory, order: usize) -> Result<Jet> {
        match self {
            AnalyticTarget::Polynomial(p) => Ok(p.along(traj, order).with_constant(0.0)),
            AnalyticTarget::FrameworkEnergy { spec, pf } => energy_along_trajectory(spec, pf, traj, order),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondOrderKind {
    Min,
    Max,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    StrictMin,
    StrictMax,
    Saddle,
    Inconclusive,
    /// The Hessian alone decides.
    SecondOrderResolved(SecondOrderKind),
}

/// A point of the parameter sphere with the coefficient value there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub value: f64,
    /// The same coefficient recomputed with jets, where available.
    pub jet_value: Option<f64>,
    /// Complement (second order) parameters in the complement basis.
    pub x0: Vec<f64>,
    /// Kernel (first order) parameters in the kernel basis.
    pub y0: Vec<f64>,
    /// Kernel part in the target's own coordinates.
    pub first: Vec<f64>,
    /// Complement part in the target's own coordinates.
    pub second: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CritReport {
    pub classification: Classification,
    /// Dimension of the Hessian kernel.
    pub nullity: usize,
    pub hessian_eigenvalues: Vec<f64>,
    /// Order of the examined coefficient (4 for the fourth derivative test).
    pub order: usize,
    /// Kernel direction with a nonzero cubic term.
    pub a3_witness: Option<Vec<f64>>,
    pub a_min: Option<SpherePoint>,
    pub a_max: Option<SpherePoint>,
    /// Distinct near-zero points of the coefficient on the sphere.
    pub zeros: Vec<SpherePoint>,
    /// Values with magnitude at most this count as zero.
    pub threshold: f64,
}

/// Eigenvectors with the largest-magnitude entry positive.
fn eigen_sorted(h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    for c in 0..n {
        let col = vecs.column(c);
        let big = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if big < 0.0 {
            vecs.column_mut(c).neg_mut();
        }
    }
    (values, vecs)
}

fn select_columns(m: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), cols.len(), |r, c| m[(r, cols[c])])
}

/// Evaluator for a coefficient on the parameter sphere of `R^{n+m}`,
/// `z = (x0, y0)`.
struct SphereProblem<'a> {
    n: usize,
    u: &'a DMatrix<f64>,
    v: &'a DMatrix<f64>,
    value: Box<dyn Fn(&[f64]) -> f64 + 'a>,
    gradient: Box<dyn Fn(&[f64]) -> Vec<f64> + 'a>,
}

impl SphereProblem<'_> {
    fn point(&self, z: &[f64], value: f64) -> SpherePoint {
        let (x0, y0) = z.split_at(self.n);
        SpherePoint {
            value,
            jet_value: None,
            x0: x0.to_vec(),
            y0: y0.to_vec(),
            first: linalg::combine(self.u, y0),
            second: linalg::combine(self.v, x0),
        }
    }
}

/// Five-point central differences; exact for polynomials of degree <= 4.
fn stencil_gradient(f: &dyn Fn(&[f64]) -> f64, z: &[f64]) -> Vec<f64> {
    let h = 1e-2;
    (0..z.len())
        .map(|i| {
            let at = |s: f64| {
                let mut w = z.to_vec();
                w[i] += s * h;
                f(&w)
            };
            (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h)
        })
        .collect()
}

struct Extrema {
    min: SpherePoint,
    max: SpherePoint,
    local_mins: Vec<SpherePoint>,
    scale: f64,
}

fn extremize(problem: &SphereProblem, n_starts: usize, extra_starts: &[Vec<f64>]) -> Extrema {
    let dim = problem.n + problem.u.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut starts: Vec<Vec<f64>> = extra_starts.to_vec();
    starts.extend((0..n_starts).map(|_| sphere::random_unit(&mut rng, dim)));
    let mut scale = 0.0f64;
    let mut min_starts = starts.clone();
    let mut max_starts = starts;
    if dim <= DENSE_MAX_DIM {
        let mut samples: Vec<(f64, Vec<f64>)> = sphere::halton_sphere(dim, DENSE_SAMPLES)
            .into_iter()
            .map(|z| ((problem.value)(&z), z))
            .collect();
        for (v, _) in &samples {
            scale = scale.max(v.abs());
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        min_starts.extend(samples.iter().take(8).map(|s| s.1.clone()));
        max_starts.extend(samples.iter().rev().take(8).map(|s| s.1.clone()));
    }
    // coefficients vanish at zeros of interest, so the stopping rule needs an absolute scale
    let opts = DescentOptions {
        grad_tol: 1e-10,
        f_scale: scale.max(1.0),
        ..DescentOptions::default()
    };
    let mut local_mins = Vec::new();
    let mut best_min: Option<(f64, Vec<f64>)> = None;
    for s in &min_starts {
        let mut fg = |z: &[f64]| ((problem.value)(z), (problem.gradient)(z));
        let r = sphere::minimize_on_sphere(&mut fg, s, 1.0, opts);
        scale = scale.max(r.value.abs());
        if best_min.as_ref().is_none_or(|b| r.value < b.0) {
            best_min = Some((r.value, r.point.clone()));
        }
        local_mins.push(problem.point(&r.point, r.value));
    }
    let mut best_max: Option<(f64, Vec<f64>)> = None;
    for s in &max_starts {
        let mut fg = |z: &[f64]| {
            let g = (problem.gradient)(z);
            (-(problem.value)(z), linalg::scaled(-1.0, &g))
        };
        let r = sphere::minimize_on_sphere(&mut fg, s, 1.0, opts);
        scale = scale.max(r.value.abs());
        if best_max.as_ref().is_none_or(|b| -r.value > b.0) {
            best_max = Some((-r.value, r.point.clone()));
        }
    }
    let (vmin, zmin) = best_min.expect("at least one start");
    let (vmax, zmax) = best_max.expect("at least one start");
    Extrema {
        min: problem.point(&zmin, vmin),
        max: problem.point(&zmax, vmax),
        local_mins,
        scale,
    }
}

fn classify(min: f64, max: f64, threshold: f64) -> Classification {
    if min > threshold {
        Classification::StrictMin
    } else if max < -threshold {
        Classification::StrictMax
    } else if min < -threshold && max > threshold {
        Classification::Saddle
    } else {
        Classification::Inconclusive
    }
}

/// Near-zero local minima, each with its mirror `y0 -> -y0` (the
/// coefficient is even in `y0`), made distinct.
fn collect_zeros(problem: &SphereProblem, local_mins: &[SpherePoint], threshold: f64) -> Vec<SpherePoint> {
    let mut zeros: Vec<SpherePoint> = Vec::new();
    for p in local_mins.iter().filter(|p| p.value.abs() <= threshold) {
        let mut z: Vec<f64> = p.x0.iter().chain(&p.y0).copied().collect();
        let mirror_z: Vec<f64> = p.x0.iter().copied().chain(p.y0.iter().map(|y| -y)).collect();
        for cand in [std::mem::take(&mut z), mirror_z] {
            let value = (problem.value)(&cand);
            let q = problem.point(&cand, value);
            let close = |a: &SpherePoint| {
                let d: f64 = a
                    .x0
                    .iter()
                    .chain(&a.y0)
                    .zip(q.x0.iter().chain(&q.y0))
                    .map(|(s, t)| (s - t).powi(2))
                    .sum();
                d.sqrt() < 1e-4
            };
            if !zeros.iter().any(close) {
                zeros.push(q);
            }
        }
    }
    zeros
}

fn negate(c: Classification) -> Classification {
    match c {
        Classification::StrictMin => Classification::StrictMax,
        Classification::StrictMax => Classification::StrictMin,
        other => other,
    }
}

/// Fourth derivative test at the origin.
///
/// Definite or indefinite Hessians are resolved at second order. For a
/// semidefinite Hessian with a kernel, a nonzero cubic form on the kernel
/// gives a saddle; otherwise `a4` is extremized over the parameter sphere.
pub fn fourth_derivative_test(target: &AnalyticTarget, tol: f64, n_starts: usize) -> Result<CritReport> {
    let g = target.gradient_at_origin()?;
    let gnorm = linalg::norm(&g);
    if gnorm > tol {
        return Err(RigidityError::NotACriticalPoint(gnorm));
    }
    let h = target.hessian_at_origin()?;
    let (eigenvalues, vecs) = eigen_sorted(h);
    let hmax = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let zero = |l: f64| l.abs() <= tol * hmax;
    let kernel: Vec<usize> = (0..eigenvalues.len()).filter(|&i| zero(eigenvalues[i])).collect();
    let rest: Vec<usize> = (0..eigenvalues.len()).filter(|&i| !zero(eigenvalues[i])).collect();
    let pos = rest.iter().any(|&i| eigenvalues[i] > 0.0);
    let neg = rest.iter().any(|&i| eigenvalues[i] < 0.0);
    let base = CritReport {
        classification: Classification::Inconclusive,
        nullity: kernel.len(),
        hessian_eigenvalues: eigenvalues.clone(),
        order: 2,
        a3_witness: None,
        a_min: None,
        a_max: None,
        zeros: Vec::new(),
        threshold: tol * (1.0 + hmax),
    };
    if pos && neg {
        return Ok(CritReport {
            classification: Classification::SecondOrderResolved(SecondOrderKind::Saddle),
            ..base
        });
    }
    if kernel.is_empty() {
        let kind = if neg { SecondOrderKind::Max } else { SecondOrderKind::Min };
        return Ok(CritReport {
            classification: Classification::SecondOrderResolved(kind),
            ..base
        });
    }
    // a negative semidefinite Hessian: test -f and flip the verdict
    let sign = if neg { -1.0 } else { 1.0 };
    let u = select_columns(&vecs, &kernel);
    let v = select_columns(&vecs, &rest);
    let (n, m) = (v.ncols(), u.ncols());

    let cubic = |a: &[f64]| -> f64 {
        let traj = PolyTrajectory::linear(linalg::combine(&u, a));
        target.jet(&traj, 3).map_or(f64::NAN, |j| sign * j.coeff(3))
    };
    let unit = |i: usize| {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        e
    };
    let sum = |idx: &[usize]| {
        let mut e = vec![0.0; m];
        for &i in idx {
            e[i] += 1.0;
        }
        e
    };
    let cubic_tol = tol * (1.0 + hmax);
    let mut witness: Option<(f64, Vec<f64>)> = None;
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                let c3 = |idx: &[usize]| cubic(&sum(idx));
                let t6 = c3(&[i, j, k]) - c3(&[i, j]) - c3(&[i, k]) - c3(&[j, k]) + c3(&[i]) + c3(&[j]) + c3(&[k]);
                if (t6 / 6.0).abs() > cubic_tol {
                    for dir in [unit(i), sum(&[i, j]), sum(&[i, k]), sum(&[j, k]), sum(&[i, j, k])] {
                        let nrm = linalg::norm(&dir);
                        let val = cubic(&dir).abs() / nrm.powi(3);
                        if witness.as_ref().is_none_or(|w| val > w.0) {
                            witness = Some((val, linalg::scaled(1.0 / nrm, &linalg::combine(&u, &dir))));
                        }
                    }
                }
            }
        }
    }
    if let Some((_, w)) = witness {
        return Ok(CritReport {
            classification: Classification::Saddle,
            order: 3,
            a3_witness: Some(w),
            ..base
        });
    }

    let a4 = |z: &[f64]| -> f64 {
        let (x0, y0) = z.split_at(n);
        let traj = PolyTrajectory::new(vec![linalg::combine(&u, y0), linalg::combine(&v, x0)]);
        target.jet(&traj, 4).map_or(f64::NAN, |j| sign * j.coeff(4))
    };
    let problem = SphereProblem {
        n,
        u: &u,
        v: &v,
        value: Box::new(a4),
        gradient: Box::new(|z: &[f64]| stencil_gradient(&a4, z)),
    };
    let ext = extremize(&problem, n_starts, &kernel_starts(n, m));
    finish(&problem, ext, tol, sign, base)
}

// unit starts along each kernel axis
fn kernel_starts(n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| {
            let mut z = vec![0.0; n + m];
            z[n + i] = 1.0;
            z
        })
        .collect()
}

fn finish(problem: &SphereProblem, ext: Extrema, tol: f64, sign: f64, base: CritReport) -> Result<CritReport> {
    let threshold = tol * (1.0 + ext.scale);
    let classification = classify(ext.min.value, ext.max.value, threshold);
    let zeros = if classification == Classification::Inconclusive {
        collect_zeros(problem, &ext.local_mins, threshold)
    } else {
        Vec::new()
    };
    let flip = |mut p: SpherePoint| {
        p.value *= sign;
        p.jet_value = p.jet_value.map(|v| v * sign);
        p
    };
    let (a_min, a_max) = if sign < 0.0 {
        (flip(ext.max), flip(ext.min))
    } else {
        (ext.min, ext.max)
    };
    Ok(CritReport {
        classification: if sign < 0.0 { negate(classification) } else { classification },
        order: 4,
        a_min: Some(a_min),
        a_max: Some(a_max),
        zeros: zeros.into_iter().map(flip).collect(),
        threshold,
        ..base
    })
}

fn fill_jet_values(report: &mut CritReport, jet_value: impl Fn(&SpherePoint) -> Option<f64>) {
    for p in report.a_min.iter_mut().chain(report.a_max.iter_mut()).chain(report.zeros.iter_mut()) {
        p.jet_value = jet_value(p);
    }
}

/// Order-4 test on a framework energy with `x` = complement of `K` and
/// `y` = `K`.
///
/// Along `dp = y0 t + x0 t^2` with `y0` in `K` every squared length moves
/// by `w_e t^2 + O(t^3)`, `w_e = 2 e.D(x0) + |D(y0)|^2`, so
/// `a4 = sum_e E_e'' / (8 d_e^2) w_e^2`. This closed form drives the
/// search; reported values are recomputed with order-4 energy jets. The
/// cubic check is skipped because `f >= 0` near `p`.
pub fn second_order_rigidity_test(
    pf: &PinnedFramework,
    spec: &EnergySpec,
    kd: &KernelDecomposition,
    tol: f64,
    n_starts: usize,
) -> Result<CritReport> {
    if kd.dim_k == 0 {
        return Err(RigidityError::InvalidArgument("the order-4 test needs a nonzero flex space".into()));
    }
    let u = &kd.k_basis;
    let v = &kd.kbar_basis;
    let (n, m) = (v.ncols(), u.ncols());
    let r = rigidity_matrix(pf);
    let rv = &r.matrix * v;
    let weights: Vec<f64> = spec
        .curvatures()
        .iter()
        .zip(&spec.terms)
        .map(|(c, t)| c / (8.0 * t.rest * t.rest))
        .collect();
    // per edge: differences of the kernel basis columns, d x m
    let kernel_diffs: Vec<DMatrix<f64>> = pf
        .edges()
        .iter()
        .map(|&e| {
            let cols: Vec<Vec<f64>> = (0..m).map(|j| pf.edge_difference(&linalg::column(u, j), e)).collect();
            DMatrix::from_fn(pf.dimension(), m, |a, j| cols[j][a])
        })
        .collect();
    let w_of = |z: &[f64]| -> Vec<(f64, nalgebra::DVector<f64>)> {
        let (x0, y0) = z.split_at(n);
        let y = nalgebra::DVector::from_column_slice(y0);
        (0..pf.edges().len())
            .map(|e| {
                let ax: f64 = (0..n).map(|i| rv[(e, i)] * x0[i]).sum();
                let by = &kernel_diffs[e] * &y;
                (2.0 * ax + by.norm_squared(), by)
            })
            .collect()
    };
    let value = |z: &[f64]| -> f64 { w_of(z).iter().zip(&weights).map(|((w, _), c)| c * w * w).sum() };
    let gradient = |z: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; n + m];
        for (e, ((w, by), c)) in w_of(z).iter().zip(&weights).enumerate() {
            let f = 4.0 * c * w;
            for (i, gi) in g.iter_mut().take(n).enumerate() {
                *gi += f * rv[(e, i)];
            }
            let bty = kernel_diffs[e].transpose() * by;
            for j in 0..m {
                g[n + j] += f * bty[j];
            }
        }
        g
    };
    let problem = SphereProblem {
        n,
        u,
        v,
        value: Box::new(value),
        gradient: Box::new(gradient),
    };
    let mut starts = kernel_starts(n, m);
    starts.extend(kernel_starts(n, m).into_iter().map(|z| linalg::scaled(-1.0, &z)));
    let ext = extremize(&problem, n_starts, &starts);
    let base = CritReport {
        classification: Classification::Inconclusive,
        nullity: m,
        hessian_eigenvalues: Vec::new(),
        order: 4,
        a3_witness: None,
        a_min: None,
        a_max: None,
        zeros: Vec::new(),
        threshold: 0.0,
    };
    let mut report = finish(&problem, ext, tol, 1.0, base)?;
    fill_jet_values(&mut report, |p| {
        let traj = PolyTrajectory::new(vec![p.first.clone(), p.second.clone()]);
        energy_along_trajectory(spec, pf, &traj, 4).ok().map(|j| j.coeff(4))
    });
    Ok(report)
}

/// Minimizes `|A w + b|^2` over `|w| = rho` given `A = U diag(sigma) V^T`
/// and `gamma = U^T b`; returns `w` in the `V` coordinates.
fn sphere_constrained_lsq(sigma: &[f64], gamma: &[f64], rho: f64) -> Vec<f64> {
    let r = sigma.len();
    if rho == 0.0 || r == 0 {
        return vec![0.0; r];
    }
    let smin2 = sigma.iter().map(|s| s * s).fold(f64::INFINITY, f64::min);
    let smax2 = sigma.iter().map(|s| s * s).fold(0.0, f64::max);
    let hard: Vec<bool> = sigma.iter().map(|s| s * s - smin2 <= 1e-14 * smax2).collect();
    let sg: Vec<f64> = sigma.iter().zip(gamma).map(|(s, g)| s * g).collect();
    // w_i(mu) = -sigma_i gamma_i / (sigma_i^2 - sigma_min^2 + mu)
    let w_at = |mu: f64| -> Vec<f64> {
        (0..r)
            .map(|i| {
                let den = sigma[i] * sigma[i] - smin2 + mu;
                if den > 0.0 {
                    -sg[i] / den
                } else {
                    0.0
                }
            })
            .collect()
    };
    let phi = |mu: f64| linalg::dot(&w_at(mu), &w_at(mu));
    let hard_case = |w: Vec<f64>| {
        let mut w = w;
        let rem = (rho * rho - linalg::dot(&w, &w)).max(0.0).sqrt();
        let i = hard.iter().position(|&h| h).expect("some direction attains sigma_min");
        w[i] += rem;
        w
    };
    if (0..r).all(|i| !hard[i] || sg[i] == 0.0) && phi(0.0) <= rho * rho {
        return hard_case(w_at(0.0));
    }
    let hi0 = linalg::norm(&sg) / rho;
    if !(hi0 > 0.0) {
        return hard_case(vec![0.0; r]);
    }
    let (mut lo, mut hi) = ((hi0 * 1e-40).ln(), hi0.ln());
    if phi(lo.exp()) <= rho * rho {
        return hard_case(w_at(lo.exp()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid.exp()) > rho * rho {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = w_at(hi.exp());
    // land exactly on the sphere
    let nw = linalg::norm(&w);
    if nw > 0.0 {
        linalg::scaled(rho / nw, &w)
    } else {
        w
    }
}

fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Order-`2k` test along `y0 p' t + y0^2 c_2 t^2 + ... + y0^{k-1} c_{k-1} t^{k-1} + z t^k`
/// with `z` in the complement of `K` and `y0^2 + |z|^2 = 1`.
///
/// Squared lengths move by `(2 e.D(z) + y0^k s_e) t^k + O(t^{k+1})` with
/// `s_e = sum_{a=1}^{k-1} D(c_a).D(c_{k-a})`, so
/// `a_2k = |A z + y0^k g|^2` for a fixed matrix `A` and vector `g`. For each
/// `y0` the minimum over `|z| = sqrt(1 - y0^2)` is found exactly from the
/// SVD of `A`; `y0` is scanned on a grid and refined by golden section.
/// `witness` holds the Taylor coefficients `c_1..c_{k-1}` of a unit,
/// complement-normalized `(1, k-1)`-flex.
pub fn order2k_family_test(
    pf: &PinnedFramework,
    spec: &EnergySpec,
    witness: &PolyTrajectory,
    k: usize,
    tol: f64,
) -> Result<CritReport> {
    let (r, kd) = decompose(pf);
    if kd.dim_k != 1 {
        return Err(RigidityError::DimKNotOne(kd.dim_k));
    }
    if k < 2 {
        return Err(RigidityError::InvalidArgument(format!("order-2k family needs k >= 2, got {k}")));
    }
    if witness.degree() < k - 1 || witness.n() != pf.n_free() {
        return Err(RigidityError::InvalidArgument(format!(
            "witness needs {} coefficients of length {}",
            k - 1,
            pf.n_free()
        )));
    }
    let witness = witness.truncated(k - 1);
    let v = &kd.kbar_basis;
    let n_edges = pf.edges().len();
    let sqrt_w: Vec<f64> = spec
        .curvatures()
        .iter()
        .zip(&spec.terms)
        .map(|(c, t)| (c / (8.0 * t.rest * t.rest)).sqrt())
        .collect();
    let a = DMatrix::from_fn(n_edges, v.ncols(), |e, j| 2.0 * sqrt_w[e] * (r.matrix.row(e) * v.column(j))[(0, 0)]);
    let g: Vec<f64> = pf
        .edges()
        .iter()
        .enumerate()
        .map(|(idx, &e)| {
            let diffs: Vec<Vec<f64>> = witness.coeffs.iter().map(|c| pf.edge_difference(c, e)).collect();
            let s: f64 = (1..k).map(|i| linalg::dot(&diffs[i - 1], &diffs[k - i - 1])).sum();
            sqrt_w[idx] * s
        })
        .collect();
    let svd = a.clone().svd(true, true);
    let ua = svd.u.expect("requested U");
    let va = svd.v_t.expect("requested V^T").transpose();
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let gamma_unit: Vec<f64> = (0..sigma.len()).map(|i| linalg::dot(&linalg::column(&ua, i), &g)).collect();

    let zeta_at = |y0: f64| -> Vec<f64> {
        let rho = (1.0 - y0 * y0).max(0.0).sqrt();
        let scale = y0.powi(k as i32);
        let gamma: Vec<f64> = gamma_unit.iter().map(|x| scale * x).collect();
        let w = sphere_constrained_lsq(&sigma, &gamma, rho);
        linalg::combine(&va, &w)
    };
    let value_at = |y0: f64, zeta: &[f64]| -> f64 {
        let az = &a * nalgebra::DVector::from_column_slice(zeta);
        let scale = y0.powi(k as i32);
        az.iter().zip(&g).map(|(x, gi)| (x + scale * gi).powi(2)).sum()
    };
    let f = |y0: f64| value_at(y0, &zeta_at(y0));

    let grid: Vec<f64> = (0..Y0_GRID).map(|i| -1.0 + 2.0 * i as f64 / (Y0_GRID - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&y| f(y)).collect();
    let scale = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let imax = (0..Y0_GRID).max_by(|&i, &j| values[i].total_cmp(&values[j])).expect("grid");
    let mut candidates: Vec<usize> = (0..Y0_GRID)
        .filter(|&i| {
            (i == 0 || values[i] <= values[i - 1]) && (i + 1 == Y0_GRID || values[i] <= values[i + 1])
        })
        .collect();
    candidates.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    candidates.truncate(4);
    let mut best = (grid[candidates[0]], values[candidates[0]]);
    for &i in &candidates {
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(Y0_GRID - 1)];
        let (y, val) = golden_section(&f, lo, hi, 80);
        if val < best.1 {
            best = (y, val);
        }
        if values[i] < best.1 {
            best = (grid[i], values[i]);
        }
    }

    let u = DMatrix::from_column_slice(pf.n_free(), 1, &witness.coeffs[0]);
    let point = |y0: f64| {
        let zeta = zeta_at(y0);
        let value = value_at(y0, &zeta);
        let second = linalg::combine(v, &zeta);
        let mut coeffs: Vec<Vec<f64>> = witness
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| linalg::scaled(y0.powi(i as i32 + 1), c))
            .collect();
        coeffs.push(second.clone());
        let jet_value = energy_along_trajectory(spec, pf, &PolyTrajectory::new(coeffs), 2 * k)
            .ok()
            .map(|j| j.coeff(2 * k));
        SpherePoint {
            value,
            jet_value,
            x0: zeta,
            y0: vec![y0],
            first: linalg::combine(&u, &[y0]),
            second,
        }
    };
    let threshold = tol * (1.0 + scale);
    let a_min = point(best.0);
    let a_max = point(grid[imax]);
    let classification = classify(a_min.value, a_max.value, threshold);
    let zeros = if classification == Classification::Inconclusive {
        let mirror = point(-best.0);
        if (mirror.y0[0] - a_min.y0[0]).abs() > 1e-12 {
            vec![a_min.clone(), mirror]
        } else {
            vec![a_min.clone()]
        }
    } else {
        Vec::new()
    };
    Ok(CritReport {
        classification,
        nullity: 1,
        hessian_eigenvalues: Vec::new(),
        order: 2 * k,
        a3_witness: None,
        a_min: Some(a_min),
        a_max: Some(a_max),
        zeros,
        threshold,
    })
}

/// Parameters `(x0, y0)` on the unit sphere and `t >= 0` with
/// `x = x0 t^2`, `y = y0 t`.
pub fn family_preimage(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
    let x2 = linalg::dot(x, x);
    let y2 = linalg::dot(y, y);
    // s = t^2 solves s^2 - |y|^2 s - |x|^2 = 0
    let s = 0.5 * (y2 + (y2 * y2 + 4.0 * x2).sqrt());
    if s == 0.0 {
        let mut y0 = vec![0.0; y.len()];
        let mut x0 = vec![0.0; x.len()];
        match (y0.first_mut(), x0.first_mut()) {
            (Some(v), _) => *v = 1.0,
            (None, Some(v)) => *v = 1.0,
            _ => {}
        }
        return (x0, y0, 0.0);
    }
    let t = s.sqrt();
    (linalg::scaled(1.0 / s, x), linalg::scaled(1.0 / t, y), t)
}
