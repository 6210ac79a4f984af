//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients indexed by exponent; the trailing (highest) coefficient is
/// non-zero unless the polynomial is zero, in which case the vector is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coefficients: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coefficients(vec![c])
    }

    pub fn from_coefficients(coefficients: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coefficients };
        p.trim();
        p
    }

    pub fn from_i64s(coefficients: &[i64]) -> Self {
        Self::from_coefficients(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `1 - q^k`
    pub fn one_minus_power(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = BigInt::one();
        c[k] -= BigInt::one();
        Self::from_coefficients(c)
    }

    fn trim(&mut self) {
        while self.coefficients.last().is_some_and(Zero::is_zero) {
            self.coefficients.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> BigInt {
        self.coefficients.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn is_palindromic(&self) -> bool {
        let c = &self.coefficients;
        (0..c.len()).all(|k| c[k] == c[c.len() - 1 - k])
    }

    /// Long division by a divisor whose leading coefficient is a unit; the
    /// remainder must vanish.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let lead = &divisor.coefficients[dd];
        let mut rem = self.coefficients.clone();
        if rem.len() <= dd {
            return if self.is_zero() {
                Ok(IntPolynomial::zero())
            } else {
                Err(Error::InexactDivision(self.to_string()))
            };
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "leading coefficient {lead} does not divide {top}"
                )));
            }
            for (i, c) in divisor.coefficients.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        let remainder = IntPolynomial::from_coefficients(rem);
        if !remainder.is_zero() {
            return Err(Error::InexactDivision(remainder.to_string()));
        }
        Ok(IntPolynomial::from_coefficients(quot))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coefficients.len().max(rhs.coefficients.len());
        let c = (0..len).map(|k| self.coefficient(k) + rhs.coefficient(k)).collect();
        IntPolynomial::from_coefficients(c)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::from_coefficients(self.coefficients.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![BigInt::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::from_coefficients(c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_and_remainder_guard() {
        // (1 - q^2) / (1 - q) = 1 + q
        let num = IntPolynomial::one_minus_power(2);
        let den = IntPolynomial::one_minus_power(1);
        assert_eq!(num.div_exact(&den).unwrap(), IntPolynomial::from_i64s(&[1, 1]));

        let bad = IntPolynomial::from_i64s(&[1, 0, 1]);
        assert!(matches!(bad.div_exact(&den), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn display_and_eval() {
        let p = IntPolynomial::from_i64s(&[1, 1, 2, 1, 1]);
        assert_eq!(p.to_string(), "1 + q + 2q^2 + q^3 + q^4");
        assert_eq!(p.eval(&BigInt::from(1)), BigInt::from(6));
        assert_eq!(p.eval(&BigInt::from(-1)), BigInt::from(2));
        assert!(p.is_palindromic());
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(IntPolynomial::from_i64s(&[0, -3]).to_string(), "-3q");
    }
}
