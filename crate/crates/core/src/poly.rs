//! Univariate polynomials in the similarity variable η.
//!
//! Every homotopy-perturbation term in this crate is a polynomial, so this is
//! the only function representation the series solver needs. Coefficients are
//! stored in power basis, lowest degree first, with trailing zeros trimmed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Power-basis polynomial; `coeffs[i]` multiplies `η^i`.
///
/// The zero polynomial has an empty coefficient list. Serializes as a bare
/// JSON array of coefficients.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·η^power`.
    pub fn monomial(c: f64, power: usize) -> Self {
        let mut coeffs = vec![0.0; power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `η`.
    pub fn eta() -> Self {
        Self::monomial(1.0, 1)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `η^i`, zero beyond the stored degree.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, eta: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * eta + c)
    }

    /// Coefficientwise `ca·a + cb·b`.
    pub fn linear_combination(a: &Polynomial, ca: f64, b: &Polynomial, cb: f64) -> Polynomial {
        let n = a.coeffs.len().max(b.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| ca * a.coeff(i) + cb * b.coeff(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&x| c * x).collect())
    }

    /// Coefficient convolution.
    pub fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// `k`-th derivative.
    pub fn derivative(&self, k: usize) -> Polynomial {
        if k >= self.coeffs.len() {
            return Polynomial::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|i| {
                // falling factorial i·(i−1)···(i−k+1)
                let factor: f64 = ((i - k + 1)..=i).map(|m| m as f64).product();
                factor * self.coeffs[i]
            })
            .collect();
        Polynomial::new(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c / (i + 1) as f64),
        );
        Polynomial::new(coeffs)
    }

    /// `k`-fold antiderivative; every intermediate constant is zero, so the
    /// result has no terms below `η^k`.
    ///
    /// Computed in one pass per coefficient: `c_i·i!/(i+k)!`.
    pub fn antiderivative_n(&self, k: usize) -> Polynomial {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + k];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let divisor: f64 = ((i + 1)..=(i + k)).map(|m| m as f64).product();
            coeffs[i + k] = c / divisor;
        }
        Polynomial::new(coeffs)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    /// Max of `|p(η)|` over `samples + 1` equally spaced points of `[0, 1]`.
    pub fn max_abs_on_unit(&self, samples: usize) -> f64 {
        let samples = samples.max(1);
        (0..=samples)
            .map(|i| self.eval(i as f64 / samples as f64).abs())
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::linear_combination(self, 1.0, rhs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::linear_combination(self, 1.0, rhs, -1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.product(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if first {
                write!(f, "{c}")?;
            } else if c < 0.0 {
                write!(f, " - {}", -c)?;
            } else {
                write!(f, " + {c}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "·η")?,
                _ => write!(f, "·η^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}
