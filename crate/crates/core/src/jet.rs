//! Truncated univariate Taylor series.
//!
//! A [`Jet`] of order `M` holds the coefficients `c_0 .. c_M` of a power
//! series in `t` at `t = 0`. On polynomial inputs every operation here is
//! exact through order `M` (up to floating point rounding).
//!
//! Alongside each coefficient the jet carries a magnitude bound obtained by
//! running the same recurrences on absolute values. `mag[n] / |c[n]|` is a
//! condition estimate for coefficient `n`: large ratios mean the value came
//! out of heavy cancellation.

use std::ops::{Add, Mul, Neg, Sub};

/// Largest supported jet order.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
    mag: Vec<f64>,
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        Self {
            c: vec![0.0; order + 1],
            mag: vec![0.0; order + 1],
        }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.c[0] = value;
        j.mag[0] = value.abs();
        j
    }

    /// The identity series `t`.
    pub fn variable(order: usize) -> Self {
        let mut j = Self::zero(order);
        if order >= 1 {
            j.c[1] = 1.0;
            j.mag[1] = 1.0;
        }
        j
    }

    /// Series with the given coefficients, truncated or zero-padded to `order`.
    pub fn from_coeffs(coeffs: &[f64], order: usize) -> Self {
        let mut j = Self::zero(order);
        for (i, &v) in coeffs.iter().take(order + 1).enumerate() {
            j.c[i] = v;
            j.mag[i] = v.abs();
        }
        j
    }

    /// Series with explicit magnitude bounds; both slices must have the
    /// same length.
    pub fn from_parts(coeffs: Vec<f64>, mags: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), mags.len(), "coefficient and magnitude lengths differ");
        assert!(!coeffs.is_empty(), "a jet needs at least a constant term");
        Self { c: coeffs, mag: mags }
    }

    /// Series from derivatives `g(0), g'(0), g''(0), ...`.
    pub fn from_derivatives(derivs: &[f64], order: usize) -> Self {
        let mut fact = 1.0;
        let coeffs: Vec<f64> = derivs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if i > 0 {
                    fact *= i as f64;
                }
                d / fact
            })
            .collect();
        Self::from_coeffs(&coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.c.get(n).copied().unwrap_or(0.0)
    }

    /// `n`-th derivative at `t = 0`.
    pub fn derivative(&self, n: usize) -> f64 {
        self.coeff(n) * factorial(n)
    }

    /// Magnitude bound for coefficient `n`.
    pub fn magnitude(&self, n: usize) -> f64 {
        self.mag.get(n).copied().unwrap_or(0.0)
    }

    /// `mag[n] / |c[n]|` (infinite when the coefficient is exactly zero
    /// but its magnitude bound is not).
    pub fn condition(&self, n: usize) -> f64 {
        let (c, m) = (self.coeff(n).abs(), self.magnitude(n));
        if m == 0.0 {
            1.0
        } else if c == 0.0 {
            f64::INFINITY
        } else {
            m / c
        }
    }

    /// Largest `|c_n|` for `1 <= n <= through`.
    pub fn scale(&self, through: usize) -> f64 {
        self.c
            .iter()
            .take(through + 1)
            .skip(1)
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest `k <= through` such that `c_1 .. c_k` are all at most
    /// `tol * scale(through)` in magnitude.
    pub fn vanishing_order(&self, through: usize, tol: f64) -> usize {
        let through = through.min(self.order());
        let threshold = tol * self.scale(through);
        (1..=through)
            .take_while(|&n| self.c[n].abs() <= threshold)
            .count()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            c: self.c.iter().map(|x| alpha * x).collect(),
            mag: self.mag.iter().map(|x| alpha.abs() * x).collect(),
        }
    }

    pub fn add_constant(&self, v: f64) -> Self {
        let mut out = self.clone();
        out.c[0] += v;
        out.mag[0] += v.abs();
        out
    }

    /// The same series with `c_0` replaced by `v`.
    pub fn with_constant(&self, v: f64) -> Self {
        let mut out = self.clone();
        out.c[0] = v;
        out.mag[0] = v.abs();
        out
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        result
    }

    /// `1 / a`; requires `c_0 != 0`.
    pub fn recip(&self) -> Self {
        let a0 = self.c[0];
        assert!(a0 != 0.0, "reciprocal of a jet with zero constant term");
        let m = self.order();
        let mut out = Self::zero(m);
        out.c[0] = 1.0 / a0;
        out.mag[0] = out.c[0].abs();
        for n in 1..=m {
            let (mut s, mut sm) = (0.0, 0.0);
            for k in 1..=n {
                s += self.c[k] * out.c[n - k];
                sm += self.mag[k] * out.mag[n - k];
            }
            out.c[n] = -s / a0;
            out.mag[n] = sm / a0.abs();
        }
        out
    }

    /// `a^alpha` for real `alpha`; requires `c_0 > 0`.
    pub fn powf(&self, alpha: f64) -> Self {
        let a0 = self.c[0];
        assert!(a0 > 0.0, "real power of a jet with non-positive constant term");
        let m = self.order();
        let mut out = Self::zero(m);
        out.c[0] = a0.powf(alpha);
        out.mag[0] = out.c[0];
        for n in 1..=m {
            let (mut s, mut sm) = (0.0, 0.0);
            for k in 1..=n {
                let w = alpha * k as f64 - (n - k) as f64;
                s += w * self.c[k] * out.c[n - k];
                sm += w.abs() * self.mag[k] * out.mag[n - k];
            }
            out.c[n] = s / (n as f64 * a0);
            out.mag[n] = sm / (n as f64 * a0);
        }
        out
    }

    /// Square root; requires `c_0 > 0`.
    pub fn sqrt(&self) -> Self {
        let a0 = self.c[0];
        assert!(a0 > 0.0, "square root of a jet with non-positive constant term");
        let m = self.order();
        let mut out = Self::zero(m);
        let b0 = a0.sqrt();
        out.c[0] = b0;
        out.mag[0] = b0;
        for n in 1..=m {
            let (mut s, mut sm) = (self.c[n], self.mag[n]);
            for k in 1..n {
                s -= out.c[k] * out.c[n - k];
                sm += out.mag[k] * out.mag[n - k];
            }
            out.c[n] = s / (2.0 * b0);
            out.mag[n] = sm / (2.0 * b0);
        }
        out
    }

    pub fn exp(&self) -> Self {
        let m = self.order();
        let mut out = Self::zero(m);
        out.c[0] = self.c[0].exp();
        out.mag[0] = out.c[0];
        for n in 1..=m {
            let (mut s, mut sm) = (0.0, 0.0);
            for k in 1..=n {
                s += k as f64 * self.c[k] * out.c[n - k];
                sm += k as f64 * self.mag[k] * out.mag[n - k];
            }
            out.c[n] = s / n as f64;
            out.mag[n] = sm / n as f64;
        }
        out
    }

    /// Natural logarithm; requires `c_0 > 0`.
    pub fn ln(&self) -> Self {
        let a0 = self.c[0];
        assert!(a0 > 0.0, "logarithm of a jet with non-positive constant term");
        let m = self.order();
        let mut out = Self::zero(m);
        out.c[0] = a0.ln();
        out.mag[0] = out.c[0].abs();
        for n in 1..=m {
            let (mut s, mut sm) = (self.c[n], self.mag[n]);
            for k in 1..n {
                s -= (k as f64 / n as f64) * out.c[k] * self.c[n - k];
                sm += (k as f64 / n as f64) * out.mag[k] * self.mag[n - k];
            }
            out.c[n] = s / a0;
            out.mag[n] = sm / a0;
        }
        out
    }

    /// `f(g(t))` where `f` is given by its Taylor coefficients about `g(0)`:
    /// `f(g0 + h) = sum_i f_coeffs[i] h^i`.
    pub fn compose(&self, f_coeffs: &[f64]) -> Self {
        let m = self.order();
        let h = self.with_constant(0.0);
        let mut acc = Self::zero(m);
        // Horner in h; terms beyond order m vanish since h has no constant term
        for &fc in f_coeffs.iter().take(m + 1).rev() {
            acc = (&acc * &h).add_constant(fc);
        }
        acc
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

fn check_orders(a: &Jet, b: &Jet) -> usize {
    assert_eq!(a.order(), b.order(), "jet orders differ");
    a.order()
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        check_orders(self, rhs);
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
            mag: self.mag.iter().zip(&rhs.mag).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        check_orders(self, rhs);
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
            mag: self.mag.iter().zip(&rhs.mag).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let m = check_orders(self, rhs);
        let mut out = Jet::zero(m);
        for i in 0..=m {
            if self.c[i] == 0.0 && self.mag[i] == 0.0 {
                continue;
            }
            for j in 0..=(m - i) {
                out.c[i + j] += self.c[i] * rhs.c[j];
                out.mag[i + j] += self.mag[i] * rhs.mag[j];
            }
        }
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scaled(-1.0)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $f(self, rhs: Jet) -> Jet {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $f(self, rhs: &Jet) -> Jet {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scaled(-1.0)
    }
}
