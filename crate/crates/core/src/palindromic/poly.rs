use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Polynomial with arbitrary-precision integer coefficients, constant term
/// first. Trailing zeros are trimmed, so the zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `u^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Horner evaluation in floating point.
    pub fn eval(&self, u: f64) -> f64 {
        self.to_f64().iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::from_i64(&[1]), |acc, _| &acc * self)
    }
}

impl Mul for &IntegerPolynomial {
    type Output = IntegerPolynomial;

    fn mul(self, rhs: &IntegerPolynomial) -> IntegerPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntegerPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntegerPolynomial::new(out)
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == num_bigint::Sign::Minus;
            let mag = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let one = mag == BigInt::from(1);
            match k {
                0 => write!(f, "{mag}")?,
                1 if one => f.write_str("u")?,
                1 => write!(f, "{mag}u")?,
                _ if one => write!(f, "u^{k}")?,
                _ => write!(f, "{mag}u^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_multiplies() {
        let p = IntegerPolynomial::from_i64(&[1, 1, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        let sq = &p * &p;
        assert_eq!(sq, IntegerPolynomial::from_i64(&[1, 2, 1]));
        assert_eq!(p.pow(4), IntegerPolynomial::from_i64(&[1, 4, 6, 4, 1]));
        assert!((&p * &IntegerPolynomial::zero()).is_zero());
        assert_eq!(IntegerPolynomial::zero().degree(), None);
    }

    #[test]
    fn display_and_eval() {
        let p = IntegerPolynomial::from_i64(&[-6, -2, -1, 1]);
        assert_eq!(p.to_string(), "u^3 - u^2 - 2u - 6");
        assert_eq!(p.eval(2.0), 8.0 - 4.0 - 4.0 - 6.0);
        assert!(IntegerPolynomial::from_i64(&[1, -4, 1]).is_palindromic());
        assert!(!p.is_palindromic());
    }
}
