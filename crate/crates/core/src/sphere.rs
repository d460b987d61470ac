//! Local minimization on a sphere `{z : |z| = r}` by Riemannian gradient
//! descent with Barzilai-Borwein steps and Armijo backtracking.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg;

#[derive(Debug, Clone, Copy)]
pub struct DescentOptions {
    pub max_iter: usize,
    /// Stop once the tangential gradient norm times the radius falls below
    /// `grad_tol * (|f| + f_scale)`.
    pub grad_tol: f64,
    pub f_scale: f64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            grad_tol: 1e-13,
            f_scale: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereMin {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

fn project(z: &[f64], r: f64) -> Vec<f64> {
    let n = linalg::norm(z);
    linalg::scaled(r / n, z)
}

fn tangent(g: &[f64], z: &[f64], r: f64) -> Vec<f64> {
    let c = linalg::dot(g, z) / (r * r);
    g.iter().zip(z).map(|(gi, zi)| gi - c * zi).collect()
}

/// Descends from `start` (rescaled onto the sphere of radius `r`).
/// `fg` returns the value and Euclidean gradient at a point.
pub fn minimize_on_sphere(
    fg: &mut dyn FnMut(&[f64]) -> (f64, Vec<f64>),
    start: &[f64],
    r: f64,
    opts: DescentOptions,
) -> SphereMin {
    let mut z = project(start, r);
    let (mut f, g) = fg(&z);
    let mut gt = tangent(&g, &z, r);
    let mut step = r / linalg::norm(&gt).max(f64::MIN_POSITIVE) * 0.1;
    let mut iterations = 0;
    let mut stalled = 0;
    for it in 0..opts.max_iter {
        iterations = it;
        let gnorm = linalg::norm(&gt);
        if gnorm * r <= opts.grad_tol * (f.abs() + opts.f_scale) || gnorm == 0.0 {
            break;
        }
        // cap the step at a quarter turn
        let mut alpha = step.min(0.5 * r / gnorm);
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = z.iter().zip(&gt).map(|(zi, gi)| zi - alpha * gi).collect();
            let trial = project(&trial, r);
            let (ft, gtrial) = fg(&trial);
            if ft <= f - 1e-4 * alpha * gnorm * gnorm {
                accepted = Some((trial, ft, gtrial));
                break;
            }
            alpha *= 0.5;
        }
        let Some((znew, fnew, gnew)) = accepted else { break };
        if f - fnew <= 1e-15 * (f.abs() + opts.f_scale) {
            stalled += 1;
            if stalled >= 5 {
                z = znew;
                f = fnew;
                break;
            }
        } else {
            stalled = 0;
        }
        let gtnew = tangent(&gnew, &znew, r);
        let s: Vec<f64> = znew.iter().zip(&z).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gtnew.iter().zip(&gt).map(|(a, b)| a - b).collect();
        let sy = linalg::dot(&s, &y);
        step = if sy > 0.0 { linalg::dot(&s, &s) / sy } else { 2.0 * alpha };
        z = znew;
        f = fnew;
        gt = gtnew;
    }
    SphereMin {
        point: z,
        value: f,
        iterations,
    }
}

/// A random point on the unit sphere in `R^n`.
pub fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = linalg::norm(&v);
        if norm > 1e-8 {
            return linalg::scaled(1.0 / norm, &v);
        }
    }
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `count` low-discrepancy points on the unit sphere in `R^n` (`n <= 8`):
/// Halton points in `[-1, 1]^n` inside the unit ball, pushed to the sphere.
pub fn halton_sphere(n: usize, count: usize) -> Vec<Vec<f64>> {
    assert!((1..=PRIMES.len()).contains(&n), "dimension {n} not supported");
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|k| 2.0 * radical_inverse(i, PRIMES[k]) - 1.0).collect();
        i += 1;
        let norm = linalg::norm(&v);
        if norm <= 1.0 && norm > 1e-3 {
            out.push(linalg::scaled(1.0 / norm, &v));
        }
    }
    out
}
