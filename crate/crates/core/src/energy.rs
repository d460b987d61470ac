//! Stiff-bar energies, their derivatives, and energy jets along polynomial
//! trajectories.
//!
//! Every evaluation works with the displacement `delta = q - p` and the
//! change in squared length `dm = 2 e.D + |D|^2` (`e = p_v - p_w`,
//! `D = delta_v - delta_w`) so that energy gaps near the rest configuration
//! do not suffer from cancellation.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RigidityError};
use crate::framework::{Framework, PinnedFramework};
use crate::jet::{factorial, Jet};
use crate::linalg;
use crate::rigidity::KernelDecomposition;
use crate::trajectory::{edge_sq_length_jets, PolyTrajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyFamily {
    /// `k/2 (l - d)^2`
    Harmonic,
    /// `k/2 (l^2 - d^2)^2`
    Algebraic,
    /// `4 eps ((sigma/l)^12 - (sigma/l)^6)`
    #[serde(rename = "lj")]
    LennardJones,
    /// `D (1 - exp(-a (l - d)))^2`
    Morse,
}

impl EnergyFamily {
    pub const ALL: [EnergyFamily; 4] = [
        EnergyFamily::Harmonic,
        EnergyFamily::Algebraic,
        EnergyFamily::LennardJones,
        EnergyFamily::Morse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnergyFamily::Harmonic => "harmonic",
            EnergyFamily::Algebraic => "algebraic",
            EnergyFamily::LennardJones => "lj",
            EnergyFamily::Morse => "morse",
        }
    }
}

impl fmt::Display for EnergyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnergyFamily {
    type Err = RigidityError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "harmonic" => Ok(EnergyFamily::Harmonic),
            "algebraic" => Ok(EnergyFamily::Algebraic),
            "lj" | "lennard-jones" | "lennardjones" => Ok(EnergyFamily::LennardJones),
            "morse" => Ok(EnergyFamily::Morse),
            other => Err(RigidityError::InvalidArgument(format!("unknown energy family `{other}`"))),
        }
    }
}

/// Parameters of one edge term.
///
/// `strength` is `k` (Harmonic, Algebraic), `eps` (Lennard-Jones) or `D`
/// (Morse); `width` is the Morse `a` and ignored otherwise. `rest` is the
/// rest length `d`; for Lennard-Jones `sigma = d 2^{-1/6}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeTerm {
    pub rest: f64,
    pub strength: f64,
    pub width: f64,
}

impl EdgeTerm {
    pub fn sigma(&self) -> f64 {
        self.rest * 2f64.powf(-1.0 / 6.0)
    }

    /// Lennard-Jones term from `eps` and `sigma`.
    pub fn lennard_jones(epsilon: f64, sigma: f64) -> Self {
        Self {
            rest: sigma * 2f64.powf(1.0 / 6.0),
            strength: epsilon,
            width: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySpec {
    pub family: EnergyFamily,
    pub terms: Vec<EdgeTerm>,
}

impl EnergySpec {
    /// Unit parameters with rest lengths taken from the framework.
    pub fn new(family: EnergyFamily, framework: &Framework) -> Self {
        Self::uniform(family, framework, 1.0, 1.0)
    }

    pub fn uniform(family: EnergyFamily, framework: &Framework, strength: f64, width: f64) -> Self {
        let terms = framework
            .edge_lengths()
            .into_iter()
            .map(|rest| EdgeTerm { rest, strength, width })
            .collect();
        Self { family, terms }
    }

    pub fn from_terms(family: EnergyFamily, terms: Vec<EdgeTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if !(t.rest > 0.0 && t.strength > 0.0 && t.width > 0.0) {
                return Err(RigidityError::InvalidArgument(format!(
                    "edge term {i} needs positive rest length and parameters"
                )));
            }
        }
        Ok(Self { family, terms })
    }

    /// Second derivative `E_ij''(d_ij)` of each edge term at its rest length.
    pub fn curvatures(&self) -> Vec<f64> {
        self.terms.iter().map(|t| curvature(self.family, t)).collect()
    }

    /// `E(p)` when every edge sits at its rest length.
    pub fn rest_energy(&self) -> f64 {
        match self.family {
            EnergyFamily::LennardJones => -self.terms.iter().map(|t| t.strength).sum::<f64>(),
            _ => 0.0,
        }
    }

    fn check(&self, pf: &PinnedFramework) -> Result<()> {
        if self.terms.len() != pf.edges().len() {
            return Err(RigidityError::InvalidArgument(format!(
                "energy has {} edge terms, framework has {} edges",
                self.terms.len(),
                pf.edges().len()
            )));
        }
        Ok(())
    }
}

fn curvature(family: EnergyFamily, t: &EdgeTerm) -> f64 {
    match family {
        EnergyFamily::Harmonic => t.strength,
        EnergyFamily::Algebraic => 4.0 * t.strength * t.rest * t.rest,
        EnergyFamily::LennardJones => 72.0 * t.strength / (t.rest * t.rest),
        EnergyFamily::Morse => 2.0 * t.strength * t.width * t.width,
    }
}

/// Value of one edge term relative to its minimum, and its first two
/// derivatives in the length, given the current length `l` and
/// `dm = l^2 - d^2`.
fn edge_gap(family: EnergyFamily, t: &EdgeTerm, l: f64, dm: f64) -> (f64, f64, f64) {
    let d = t.rest;
    let k = t.strength;
    match family {
        EnergyFamily::Harmonic => {
            let u = dm / (l + d);
            (0.5 * k * u * u, k * u, k)
        }
        EnergyFamily::Algebraic => (0.5 * k * dm * dm, 2.0 * k * l * dm, 2.0 * k * (3.0 * l * l - d * d)),
        EnergyFamily::LennardJones => {
            // y = (d/l)^6, E - E_min = eps (y - 1)^2
            let ym1 = (-3.0 * (dm / (d * d)).ln_1p()).exp_m1();
            let y = 1.0 + ym1;
            (
                k * ym1 * ym1,
                -12.0 * k * y * ym1 / l,
                12.0 * k * y * (13.0 * y - 7.0) / (l * l),
            )
        }
        EnergyFamily::Morse => {
            let a = t.width;
            let u = dm / (l + d);
            let s = -(-a * u).exp_m1();
            (k * s * s, 2.0 * k * a * s * (1.0 - s), 2.0 * k * a * a * (1.0 - s) * (1.0 - 2.0 * s))
        }
    }
}

/// `l0^2 - d^2`, with rest lengths that agree with the current length up
/// to rounding treated as exact. Otherwise the rounding of `d = sqrt(l0^2)`
/// would leave a spurious linear term of relative size `1e-16` in the energy.
fn rest_offset(l0sq: f64, rest: f64) -> f64 {
    let off = l0sq - rest * rest;
    if off.abs() <= 8.0 * f64::EPSILON * l0sq {
        0.0
    } else {
        off
    }
}

/// Energy, gap to the rest configuration, gradient and Hessian.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEval {
    /// `E(q)`
    pub value: f64,
    /// `E(q) - E(p)`, computed without cancellation.
    pub gap: f64,
    pub gradient: Vec<f64>,
    pub hessian: Option<DMatrix<f64>>,
}

/// Evaluates the energy at `p + delta` (pinned coordinates).
pub fn energy_at_displacement(
    spec: &EnergySpec,
    pf: &PinnedFramework,
    delta: &[f64],
    with_hessian: bool,
) -> Result<EnergyEval> {
    spec.check(pf)?;
    let n = pf.n_free();
    let dim = pf.dimension();
    let mut gap = 0.0;
    let mut gradient = vec![0.0; n];
    let mut hessian = with_hessian.then(|| DMatrix::zeros(n, n));
    for (idx, (&e, term)) in pf.edges().iter().zip(&spec.terms).enumerate() {
        let base = pf.edge_vector(e);
        let dd = pf.edge_difference(delta, e);
        let l0sq = linalg::dot(&base, &base);
        let dm_geom = 2.0 * linalg::dot(&base, &dd) + linalg::dot(&dd, &dd);
        let dm = dm_geom + rest_offset(l0sq, term.rest);
        let lsq = l0sq + dm_geom;
        if !(lsq > 0.0) {
            return Err(RigidityError::ZeroLengthEdge(idx));
        }
        let l = lsq.sqrt();
        let (g, e1, e2) = edge_gap(spec.family, term, l, dm);
        gap += g;
        let dir: Vec<f64> = base.iter().zip(&dd).map(|(b, x)| (b + x) / l).collect();
        let cols = |v: usize| (0..dim).map(move |axis| (axis, pf.free_index(v, axis)));
        for (axis, c) in cols(e.0) {
            if let Some(c) = c {
                gradient[c] += e1 * dir[axis];
            }
        }
        for (axis, c) in cols(e.1) {
            if let Some(c) = c {
                gradient[c] -= e1 * dir[axis];
            }
        }
        if let Some(h) = hessian.as_mut() {
            let tangential = e1 / l;
            let block = |i: usize, j: usize| {
                let id = if i == j { 1.0 } else { 0.0 };
                e2 * dir[i] * dir[j] + tangential * (id - dir[i] * dir[j])
            };
            for (ai, ci) in cols(e.0).chain(cols(e.1)).enumerate() {
                let Some(ci_col) = ci.1 else { continue };
                for (aj, cj) in cols(e.0).chain(cols(e.1)).enumerate() {
                    let Some(cj_col) = cj.1 else { continue };
                    let sign = if (ai < dim) == (aj < dim) { 1.0 } else { -1.0 };
                    h[(ci_col, cj_col)] += sign * block(ci.0, cj.0);
                }
            }
        }
    }
    let offset: f64 = spec
        .terms
        .iter()
        .zip(pf.edges())
        .map(|(t, &e)| {
            let b = pf.edge_vector(e);
            let l0 = linalg::norm(&b);
            edge_gap(spec.family, t, l0, rest_offset(linalg::dot(&b, &b), t.rest)).0
        })
        .sum();
    Ok(EnergyEval {
        value: spec.rest_energy() + gap,
        gap: gap - offset,
        gradient,
        hessian,
    })
}

/// `E(q)`, its gradient and Hessian at pinned coordinates `q`.
pub fn energy_value_grad_hess(
    spec: &EnergySpec,
    pf: &PinnedFramework,
    q: &[f64],
) -> Result<(f64, Vec<f64>, DMatrix<f64>)> {
    if q.len() != pf.n_free() {
        return Err(RigidityError::InvalidArgument("coordinate vector length does not match the free coordinates".into()));
    }
    let delta: Vec<f64> = q.iter().zip(pf.coordinates()).map(|(a, b)| a - b).collect();
    let ev = energy_at_displacement(spec, pf, &delta, true)?;
    Ok((ev.value, ev.gradient, ev.hessian.expect("requested Hessian")))
}

/// Hessian of the energy at the pinned configuration.
pub fn rest_hessian(spec: &EnergySpec, pf: &PinnedFramework) -> Result<DMatrix<f64>> {
    let zero = vec![0.0; pf.n_free()];
    Ok(energy_at_displacement(spec, pf, &zero, true)?.hessian.expect("requested Hessian"))
}

/// Orthonormal basis of the numerical kernel of the rest Hessian
/// (eigenvalues at most `tol * max |lambda|`).
pub fn hessian_kernel(spec: &EnergySpec, pf: &PinnedFramework, tol: f64) -> Result<DMatrix<f64>> {
    let h = rest_hessian(spec, pf)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(h);
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i].abs() <= tol * max).collect();
    Ok(DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]))
}

/// Whether the kernel of the rest Hessian coincides with the flex space `K`
/// (eigenvalue tolerance `1e-8`, principal angles below `1e-6`).
pub fn kernel_of_hessian_equals_k(spec: &EnergySpec, pf: &PinnedFramework, kd: &KernelDecomposition) -> bool {
    match hessian_kernel(spec, pf, 1e-8) {
        Ok(hk) => hk.ncols() == kd.dim_k && linalg::subspace_gap(&kd.k_basis, &hk) < 1e-6,
        Err(_) => false,
    }
}

/// Taylor coefficients of `t -> E(p(t)) - E(p)` through order `order`.
///
/// Each squared length is a polynomial jet; lengths, powers and
/// exponentials are then taken with jet arithmetic. Constant terms that
/// vanish analytically are set to zero before they can pollute higher
/// coefficients.
pub fn energy_along_trajectory(
    spec: &EnergySpec,
    pf: &PinnedFramework,
    traj: &PolyTrajectory,
    order: usize,
) -> Result<Jet> {
    if order == 0 || order > crate::jet::MAX_ORDER {
        return Err(RigidityError::InvalidArgument(format!(
            "jet order must be in 1..={}, got {order}",
            crate::jet::MAX_ORDER
        )));
    }
    spec.check(pf)?;
    if traj.degree() > 0 && traj.n() != pf.n_free() {
        return Err(RigidityError::InvalidArgument("trajectory length does not match the free coordinates".into()));
    }
    let dms = edge_sq_length_jets(pf, traj, order);
    let mut total = Jet::zero(order);
    for (idx, ((&e, term), dm)) in pf.edges().iter().zip(&spec.terms).zip(&dms).enumerate() {
        let b = pf.edge_vector(e);
        let l0sq = linalg::dot(&b, &b);
        if !(l0sq > 0.0) {
            return Err(RigidityError::ZeroLengthEdge(idx));
        }
        total = total + edge_energy_jet(spec.family, term, l0sq, dm);
    }
    Ok(total.with_constant(0.0))
}

/// Jet of one edge term as a function of `dm = l^2 - l0^2` (no constant).
fn edge_energy_jet(family: EnergyFamily, t: &EdgeTerm, l0sq: f64, dm: &Jet) -> Jet {
    let l0 = l0sq.sqrt();
    let d = if rest_offset(l0sq, t.rest) == 0.0 { l0 } else { t.rest };
    let k = t.strength;
    // rho = l^2 / l0^2 = 1 + dm / l0^2
    let rho = dm.scaled(1.0 / l0sq).with_constant(1.0);
    // u = l - d
    let u = || rho.sqrt().with_constant(0.0).scaled(l0).add_constant(l0 - d);
    match family {
        EnergyFamily::Harmonic => u().square().scaled(0.5 * k),
        EnergyFamily::Algebraic => dm.add_constant(l0sq - d * d).square().scaled(0.5 * k),
        EnergyFamily::LennardJones => {
            // y - 1 with y = (d/l)^6 = (d/l0)^6 rho^-3
            let ratio = (d / l0).powi(6);
            let y_m1 = rho.powf(-3.0).with_constant(0.0).scaled(ratio).add_constant(ratio - 1.0);
            y_m1.square().scaled(k)
        }
        EnergyFamily::Morse => {
            let a = t.width;
            let au = u().scaled(-a);
            let c0 = au.coeff(0);
            // 1 - exp(-a u): constant exp_m1, higher terms from the exp jet
            let e = au.with_constant(0.0).exp().with_constant(0.0).scaled(c0.exp());
            let s = e.add_constant(c0.exp_m1()).scaled(-1.0);
            s.square().scaled(k)
        }
    }
}

/// `d^n/dt^n f(g(t))` at `t = 0` by the partition formula.
///
/// `f_derivs[i] = f^{(i)}(g(0))` and `g_derivs[i] = g^{(i)}(0)`; entry 0 of
/// `g_derivs` is ignored. Returns the value and the sum of absolute terms.
pub fn faa_di_bruno_with_scale(f_derivs: &[f64], g_derivs: &[f64], n: usize) -> (f64, f64) {
    if n == 0 {
        let v = f_derivs.first().copied().unwrap_or(0.0);
        return (v, v.abs());
    }
    let mut total = 0.0;
    let mut scale = 0.0;
    let mut js = vec![0usize; n + 1];
    partitions(n, n, &mut js, &mut |js| {
        let k: usize = js.iter().sum();
        let mut term = factorial(n) * f_derivs.get(k).copied().unwrap_or(0.0);
        for (i, &j) in js.iter().enumerate().skip(1) {
            if j > 0 {
                let gi = g_derivs.get(i).copied().unwrap_or(0.0);
                term *= (gi / factorial(i)).powi(j as i32) / factorial(j);
            }
        }
        total += term;
        scale += term.abs();
    });
    (total, scale)
}

/// `d^n/dt^n f(g(t))` at `t = 0`; see [`faa_di_bruno_with_scale`].
pub fn faa_di_bruno_term(f_derivs: &[f64], g_derivs: &[f64], n: usize) -> f64 {
    faa_di_bruno_with_scale(f_derivs, g_derivs, n).0
}

// visits every (j_1..j_n) with sum i j_i = n, using parts of size <= max_part
fn partitions(remaining: usize, max_part: usize, js: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if remaining == 0 {
        visit(js);
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        js[part] += 1;
        partitions(remaining - part, part, js, visit);
        js[part] -= 1;
    }
}

/// Activity and vanishing order of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlexClass {
    /// Smallest `i` with a nonzero coefficient `c_i`.
    pub j_active: usize,
    /// Largest `k <= k_check` with the first `k` derivatives of the
    /// measurement vanishing.
    pub k_vanish: usize,
}

/// Classifies `traj` as a `(j, k)`-flex using squared edge lengths.
///
/// A derivative counts as zero when its edge-vector norm is at most
/// `tol * max(1, bound)` where `bound` is the matching magnitude bound from
/// the jet arithmetic.
pub fn classify_flex(pf: &PinnedFramework, traj: &PolyTrajectory, k_check: usize, tol: f64) -> FlexClass {
    let jets = edge_sq_length_jets(pf, traj, k_check.max(1));
    classify_with(traj, &jets, k_check, tol)
}

/// As [`classify_flex`], measuring edge lengths instead of squared lengths.
pub fn classify_flex_lengths(pf: &PinnedFramework, traj: &PolyTrajectory, k_check: usize, tol: f64) -> FlexClass {
    let order = k_check.max(1);
    let jets: Vec<Jet> = edge_sq_length_jets(pf, traj, order)
        .iter()
        .zip(pf.edges())
        .map(|(dm, &e)| {
            let b = pf.edge_vector(e);
            let l0sq = linalg::dot(&b, &b);
            dm.scaled(1.0 / l0sq).with_constant(1.0).sqrt().with_constant(0.0).scaled(l0sq.sqrt())
        })
        .collect();
    classify_with(traj, &jets, k_check, tol)
}

fn classify_with(traj: &PolyTrajectory, jets: &[Jet], k_check: usize, tol: f64) -> FlexClass {
    let j_active = traj
        .coeff_norms()
        .iter()
        .position(|&c| c > tol)
        .map_or(0, |i| i + 1);
    let k_vanish = (1..=k_check)
        .take_while(|&n| {
            let f = factorial(n);
            let value: f64 = jets.iter().map(|j| (f * j.coeff(n)).powi(2)).sum::<f64>().sqrt();
            let bound: f64 = jets.iter().map(|j| (f * j.magnitude(n)).powi(2)).sum::<f64>().sqrt();
            value <= tol * bound.max(1.0)
        })
        .count();
    FlexClass { j_active, k_vanish }
}
