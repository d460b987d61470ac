//! Sparse multivariate polynomials in monomial form.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RigidityError};
use crate::jet::Jet;
use crate::trajectory::PolyTrajectory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub coef: f64,
}

/// `sum_k coef_k prod_i x_i^{exps_k[i]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n_vars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Result<Self> {
        let n_vars = terms.first().map_or(0, |m| m.exps.len());
        if n_vars == 0 {
            return Err(RigidityError::InvalidArgument("polynomial needs at least one variable".into()));
        }
        for (i, m) in terms.iter().enumerate() {
            if m.exps.len() != n_vars {
                return Err(RigidityError::InvalidArgument(format!(
                    "monomial {i} has {} exponents, expected {n_vars}",
                    m.exps.len()
                )));
            }
            if !m.coef.is_finite() {
                return Err(RigidityError::InvalidArgument(format!("monomial {i} has a non-finite coefficient")));
            }
        }
        Ok(Self { n_vars, terms })
    }

    /// Parses `[{"exps": [..], "coef": r}, ...]`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let terms: Vec<Monomial> = serde_json::from_str(s).map_err(|e| RigidityError::Parse(e.to_string()))?;
        Self::new(terms)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.terms).expect("monomials serialize")
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|m| m.exps.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|m| m.coef * m.exps.iter().zip(x).map(|(&e, xi)| xi.powi(e as i32)).product::<f64>())
            .sum()
    }

    /// Gradient at the origin (the linear terms).
    pub fn gradient_at_origin(&self) -> Vec<f64> {
        let mut g = vec![0.0; self.n_vars];
        for m in &self.terms {
            if m.exps.iter().sum::<u32>() == 1 {
                let i = m.exps.iter().position(|&e| e == 1).expect("degree one");
                g[i] += m.coef;
            }
        }
        g
    }

    /// Hessian at the origin (the quadratic terms).
    pub fn hessian_at_origin(&self) -> nalgebra::DMatrix<f64> {
        let mut h = nalgebra::DMatrix::zeros(self.n_vars, self.n_vars);
        for m in &self.terms {
            if m.exps.iter().sum::<u32>() != 2 {
                continue;
            }
            let idx: Vec<usize> = (0..self.n_vars).filter(|&i| m.exps[i] > 0).collect();
            match idx.as_slice() {
                [i] => h[(*i, *i)] += 2.0 * m.coef,
                [i, j] => {
                    h[(*i, *j)] += m.coef;
                    h[(*j, *i)] += m.coef;
                }
                _ => unreachable!("degree two monomial"),
            }
        }
        h
    }

    /// Taylor coefficients of `t -> f(traj(t))` through `order`.
    pub fn along(&self, traj: &PolyTrajectory, order: usize) -> Jet {
        let vars: Vec<Jet> = (0..self.n_vars).map(|i| traj.coordinate_jet(i, order)).collect();
        let mut total = Jet::zero(order);
        for m in &self.terms {
            let mut term = Jet::constant(m.coef, order);
            for (v, &e) in vars.iter().zip(&m.exps) {
                if e > 0 {
                    term = &term * &v.powi(e);
                }
            }
            total = total + term;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Polynomial {
        // x^2 - 2 x y^2 + y^4 + 3 x + x y
        Polynomial::from_json_str(
            r#"[{"exps":[2,0],"coef":1},{"exps":[1,2],"coef":-2},{"exps":[0,4],"coef":1},
                {"exps":[1,0],"coef":3},{"exps":[1,1],"coef":1}]"#,
        )
        .unwrap()
    }

    #[test]
    fn eval_gradient_hessian() {
        let p = sample();
        assert_eq!(p.degree(), 4);
        assert_eq!(p.eval(&[1.0, 2.0]), 1.0 - 8.0 + 16.0 + 3.0 + 2.0);
        assert_eq!(p.gradient_at_origin(), vec![3.0, 0.0]);
        let h = p.hessian_at_origin();
        assert_eq!(h[(0, 0)], 2.0);
        assert_eq!(h[(0, 1)], 1.0);
        assert_eq!(h[(1, 1)], 0.0);
    }

    #[test]
    fn jet_along_curve_matches_evaluation() {
        let p = sample();
        let traj = PolyTrajectory::new(vec![vec![0.5, -1.0], vec![0.25, 2.0]]);
        let jet = p.along(&traj, 8);
        for t in [0.1, -0.3, 0.7] {
            assert!((jet.eval(t) - p.eval(&traj.displacement(t))).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_ragged_monomials() {
        assert!(Polynomial::from_json_str(r#"[{"exps":[1],"coef":1},{"exps":[1,1],"coef":1}]"#).is_err());
        assert!(Polynomial::from_json_str("[]").is_err());
    }
}
