//! The flex ladder: extends a first-order flex one derivative at a time by
//! linear solves, which decides the rigidity order when `dim K = 1`.

use serde::{Deserialize, Serialize};

use crate::critical::{self, Classification};
use crate::energy::{EnergyFamily, EnergySpec};
use crate::error::{Result, RigidityError};
use crate::framework::{PinnedFramework, DEFAULT_RANK_TOL};
use crate::jet::binomial;
use crate::linalg::{self, PseudoInverse};
use crate::rigidity::{decompose, rigidity_matrix, KernelDecomposition};
use crate::trajectory::PolyTrajectory;

pub const DEFAULT_MAX_K: u32 = 32;
pub const DEFAULT_LADDER_TOL: f64 = 1e-7;

/// Multistart count used by the order-4 energy fallback.
const ORDER4_STARTS: usize = 64;
const ORDER4_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Verdict {
    /// Rigidity order `k`.
    Order(u32),
    /// A `(1, k)`-flex was found for every `k` up to the cap.
    FlexFoundUpTo(u32),
    Inconclusive(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FirstOrder,
    Ladder,
    Order4Energy,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::FirstOrder => "first-order",
            Method::Ladder => "ladder",
            Method::Order4Energy => "order4-energy",
        }
    }
}

/// Least-squares outcome of one ladder level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelResidual {
    pub level: u32,
    /// `|R x - rhs|`
    pub residual: f64,
    pub rhs_norm: f64,
    /// `residual / (1 + rhs_norm)`, compared against the tolerance.
    pub relative: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub verdict: Verdict,
    pub method: Method,
    pub dim_k: usize,
    /// Flex coefficients found (Taylor convention), if any.
    pub witness: Option<PolyTrajectory>,
    pub residuals: Vec<LevelResidual>,
}

impl OrderReport {
    /// Ratio of the rejected level's relative residual to the largest
    /// accepted one; `None` unless a level was rejected after at least one
    /// accepted level.
    pub fn margin(&self) -> Option<f64> {
        let rejected = self.residuals.iter().find(|r| !r.accepted)?;
        // treat exact zeros as the smallest positive double so the ratio stays finite
        let accepted = self
            .residuals
            .iter()
            .filter(|r| r.accepted)
            .map(|r| r.relative)
            .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))))?;
        Some(rejected.relative / accepted.max(f64::MIN_POSITIVE))
    }

    pub fn order(&self) -> Option<u32> {
        match self.verdict {
            Verdict::Order(k) => Some(k),
            _ => None,
        }
    }

    /// Human-readable verdict line.
    pub fn summary(&self) -> String {
        match &self.verdict {
            Verdict::Order(k) => format!("rigidity order {k} ({})", self.method.tag()),
            Verdict::FlexFoundUpTo(k) => {
                format!("no rigidity certificate up to k={k}; (1,{k})-flex found")
            }
            Verdict::Inconclusive(reason) => format!("inconclusive: {reason}"),
        }
    }
}

/// Right-hand side of the level-`l` flex equation `R p^{(l)} = rhs`, from
/// the derivatives `p', ..., p^{(l-1)}` (`derivs[0] = p'`).
///
/// Entry `vw` is `-1/2 sum_{a=1}^{l-1} C(l,a) (p^{(a)}_v - p^{(a)}_w).(p^{(l-a)}_v - p^{(l-a)}_w)`.
pub fn flex_rhs(pf: &PinnedFramework, derivs: &[Vec<f64>], l: usize) -> Vec<f64> {
    assert!(
        derivs.len() + 1 >= l,
        "level {l} needs {} derivatives, got {}",
        l.saturating_sub(1),
        derivs.len()
    );
    pf.edges()
        .iter()
        .map(|&e| {
            let diffs: Vec<Vec<f64>> = derivs[..l.saturating_sub(1)]
                .iter()
                .map(|d| pf.edge_difference(d, e))
                .collect();
            let mut s = 0.0;
            // pair a with l - a once, doubling off-diagonal terms
            for a in 1..l {
                let b = l - a;
                if a > b {
                    break;
                }
                let w = if a == b { 1.0 } else { 2.0 };
                s += w * binomial(l, a) * linalg::dot(&diffs[a - 1], &diffs[b - 1]);
            }
            -0.5 * s
        })
        .collect()
}

/// Unit kernel vector with its first clearly nonzero entry positive.
pub fn normalized_flex(kd: &KernelDecomposition) -> Result<Vec<f64>> {
    if kd.dim_k != 1 {
        return Err(RigidityError::DimKNotOne(kd.dim_k));
    }
    let mut v = linalg::column(&kd.k_basis, 0);
    let n = linalg::norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-9) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(v)
}

/// Runs the ladder from the canonical unit flex of `K`.
pub fn solve_ladder(
    pf: &PinnedFramework,
    kd: &KernelDecomposition,
    max_k: u32,
    tol: f64,
) -> Result<OrderReport> {
    let p1 = normalized_flex(kd)?;
    solve_ladder_from(pf, kd, p1, max_k, tol)
}

/// Runs the ladder from a caller-supplied first-order flex `p1 in K`.
///
/// Each level solves `min |R x - rhs_l|` by the minimum-norm
/// pseudoinverse, so every `p^{(l)}` lands in the complement of `K`.
pub fn solve_ladder_from(
    pf: &PinnedFramework,
    kd: &KernelDecomposition,
    p1: Vec<f64>,
    max_k: u32,
    tol: f64,
) -> Result<OrderReport> {
    if kd.dim_k != 1 {
        return Err(RigidityError::DimKNotOne(kd.dim_k));
    }
    if max_k < 2 {
        return Err(RigidityError::InvalidArgument(format!("max_k must be at least 2, got {max_k}")));
    }
    if p1.len() != pf.n_free() {
        return Err(RigidityError::InvalidArgument("flex length does not match the free coordinates".into()));
    }
    let r = rigidity_matrix(pf);
    let pinv = PseudoInverse::new(&r.matrix, DEFAULT_RANK_TOL);
    let mut derivs = vec![p1];
    let mut residuals = Vec::new();
    for l in 2..=max_k {
        let rhs = flex_rhs(pf, &derivs, l as usize);
        let x = pinv.solve(&rhs);
        let rx = r.apply(&x);
        let residual = linalg::norm(&rx.iter().zip(&rhs).map(|(a, b)| a - b).collect::<Vec<_>>());
        let rhs_norm = linalg::norm(&rhs);
        let relative = residual / (1.0 + rhs_norm);
        let accepted = relative <= tol;
        residuals.push(LevelResidual {
            level: l,
            residual,
            rhs_norm,
            relative,
            accepted,
        });
        if !accepted {
            return Ok(OrderReport {
                verdict: Verdict::Order(l),
                method: Method::Ladder,
                dim_k: 1,
                witness: Some(PolyTrajectory::from_derivatives(&derivs)),
                residuals,
            });
        }
        derivs.push(x);
    }
    Ok(OrderReport {
        verdict: Verdict::FlexFoundUpTo(max_k),
        method: Method::Ladder,
        dim_k: 1,
        witness: Some(PolyTrajectory::from_derivatives(&derivs)),
        residuals,
    })
}

/// Rigidity order of a pinned framework.
///
/// `dim K = 0` gives order 1; `dim K = 1` runs the ladder; larger kernels
/// try the order-4 energy test, which can only certify order 2.
pub fn rigidity_order(pf: &PinnedFramework, max_k: u32, tol: f64) -> Result<OrderReport> {
    let (_, kd) = decompose(pf);
    match kd.dim_k {
        0 => Ok(OrderReport {
            verdict: Verdict::Order(1),
            method: Method::FirstOrder,
            dim_k: 0,
            witness: None,
            residuals: Vec::new(),
        }),
        1 => solve_ladder(pf, &kd, max_k, tol),
        dim_k => {
            let spec = EnergySpec::new(EnergyFamily::Harmonic, pf.framework());
            let report = critical::second_order_rigidity_test(pf, &spec, &kd, ORDER4_TOL, ORDER4_STARTS)?;
            let verdict = if report.classification == Classification::StrictMin {
                Verdict::Order(2)
            } else {
                Verdict::Inconclusive("dimK>1 beyond order 2 requires symbolic methods".into())
            };
            Ok(OrderReport {
                verdict,
                method: Method::Order4Energy,
                dim_k,
                witness: None,
                residuals: Vec::new(),
            })
        }
    }
}
