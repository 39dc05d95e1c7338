//! Closed real intervals `[lo, hi]`.
//!
//! Endpoints are plain `f64` with round-to-nearest arithmetic; no outward
//! rounding is performed. Uncertainty is propagated downstream by sampling
//! the parametric form [`Interval::param_form`], so the arithmetic here is
//! only ever applied to short chains.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with `lo <= hi`.
///
/// A degenerate interval (`lo == hi`) is a crisp value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval holding a single crisp value.
    pub fn crisp(value: f64) -> Self {
        Self {
            lo: value,
            hi: value,
        }
    }

    /// `center ± |center|·fraction`, e.g. `1 ± 5%` for `fraction = 0.05`.
    pub fn from_relative_spread(center: f64, fraction: f64) -> Result<Self> {
        if !fraction.is_finite() || fraction < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "relative spread must be finite and >= 0, got {fraction}"
            )));
        }
        let half = center.abs() * fraction;
        Self::new(center - half, center + half)
    }

    /// Smallest interval holding all four endpoint combinations.
    fn hull(values: [f64; 4]) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        // lo + w/2 stays inside [lo, hi] even when lo + hi would overflow
        self.lo + 0.5 * (self.hi - self.lo)
    }

    pub fn is_crisp(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// Quotient over the four endpoint ratios. Fails when the divisor
    /// contains zero.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero {
                lo: rhs.lo,
                hi: rhs.hi,
            });
        }
        Ok(Self::hull([
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ]))
    }

    /// Parametric form `lo + α·(hi − lo)` for `α ∈ [0, 1]`.
    ///
    /// Returns exactly `lo` at `α = 0` and exactly `hi` at `α = 1`.
    pub fn param_form(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        if alpha == 1.0 {
            return Ok(self.hi);
        }
        Ok(alpha * (self.hi - self.lo) + self.lo)
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        Self::hull([
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ])
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Accepts `lo:hi` or `center±pct%` (ASCII `+-` also accepted).
impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let input = s.trim();
        let fail = |reason: &str| Error::IntervalParse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let number = |text: &str| -> Result<f64> {
            text.trim()
                .parse::<f64>()
                .map_err(|_| fail(&format!("{:?} is not a number", text.trim())))
        };

        let spread_form = input
            .split_once('±')
            .or_else(|| input.split_once("+-"));
        if let Some((center, spread)) = spread_form {
            let pct = spread
                .trim()
                .strip_suffix('%')
                .ok_or_else(|| fail("spread must end with '%'"))?;
            let center = number(center)?;
            let pct = number(pct)?;
            return Self::from_relative_spread(center, pct / 100.0);
        }
        if let Some((lo, hi)) = input.split_once(':') {
            let (lo, hi) = (number(lo)?, number(hi)?);
            return Self::new(lo, hi);
        }
        Err(fail("expected \"lo:hi\" or \"center±pct%\""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(iv(0.95, 1.05) + iv(0.95, 1.05), iv(1.9, 2.1));
        assert_eq!(Interval::crisp(2.5) + Interval::crisp(1.25), Interval::crisp(3.75));
        assert_eq!(iv(-1.0, 2.0) + iv(3.0, 4.0), iv(2.0, 6.0));
    }

    #[test]
    fn sub_examples() {
        assert_eq!(iv(1.0, 2.0) - iv(3.0, 4.0), iv(-3.0, -1.0));
        let a = iv(0.0, 1.0);
        assert_eq!(a - a, iv(-1.0, 1.0));
        assert_eq!(Interval::crisp(5.0) - Interval::crisp(2.0), Interval::crisp(3.0));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
        assert_eq!(Interval::crisp(0.0) * iv(-3.0, 7.0), Interval::crisp(0.0));
        let sq = iv(0.95, 1.05) * iv(0.95, 1.05);
        assert!((sq.lo() - 0.9025).abs() < 1e-15);
        assert!((sq.hi() - 1.1025).abs() < 1e-15);
    }

    #[test]
    fn div_examples() {
        assert_eq!(iv(1.0, 2.0).checked_div(iv(2.0, 4.0)).unwrap(), iv(0.25, 1.0));
        assert_eq!(
            iv(-3.0, 7.0).checked_div(Interval::crisp(1.0)).unwrap(),
            iv(-3.0, 7.0)
        );
        assert!(matches!(
            iv(1.0, 2.0).checked_div(iv(-1.0, 1.0)),
            Err(Error::DivisionByZero { .. })
        ));
        assert!(iv(1.0, 2.0).checked_div(iv(0.0, 1.0)).is_err());
    }

    #[test]
    fn param_form_examples() {
        let a = iv(0.95, 1.05);
        assert_eq!(a.param_form(0.0).unwrap(), 0.95);
        assert_eq!(a.param_form(1.0).unwrap(), 1.05);
        assert!((a.param_form(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(a.param_form(1.5), Err(Error::AlphaOutOfRange(_))));
        assert!(a.param_form(-0.1).is_err());
        assert!(a.param_form(f64::NAN).is_err());
    }

    #[test]
    fn rejects_inverted_or_non_finite() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn width_and_midpoint() {
        let a = iv(-1.0, 3.0);
        assert_eq!(a.width(), 4.0);
        assert_eq!(a.midpoint(), 1.0);
        assert!(Interval::crisp(0.3).is_crisp());
    }

    #[test]
    fn parses_both_notations() {
        assert_eq!("0.95:1.05".parse::<Interval>().unwrap(), iv(0.95, 1.05));
        let pct: Interval = "1±5%".parse().unwrap();
        assert!((pct.lo() - 0.95).abs() < 1e-15 && (pct.hi() - 1.05).abs() < 1e-15);
        let ascii: Interval = "2 +- 10%".parse().unwrap();
        assert!((ascii.lo() - 1.8).abs() < 1e-15 && (ascii.hi() - 2.2).abs() < 1e-15);
        let neg: Interval = "-1±5%".parse().unwrap();
        assert!(neg.lo() < neg.hi());
        assert!("1.05:0.95".parse::<Interval>().is_err());
        assert!("1±5".parse::<Interval>().is_err());
        assert!("abc".parse::<Interval>().is_err());
    }
}
