use thiserror::Error;

/// Errors raised by the library. Construction errors are reported when a
/// reference function is built, everything else at evaluation time.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent must satisfy p > {min}, got {p}")]
    InvalidExponent { p: f64, min: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("point ({u}, {r}) lies outside the admissible domain")]
    OutsideDomain { u: f64, r: f64 },

    #[error("the Bregman ratio is undefined for identical points")]
    IdenticalPoints,

    #[error("the Bregman ratio is numerically degenerate (denominator {denominator:e})")]
    DegenerateRatio { denominator: f64 },

    #[error("polynomial is not palindromic of even degree")]
    NotPalindromic,

    #[error("exponent {0} is not supported here")]
    UnsupportedExponent(f64),

    #[error("no admissible root found: {0}")]
    RootNotFound(String),

    #[error("sum rule does not apply; alpha lies in [{lower}, {upper}]")]
    RuleNotApplicable { lower: f64, upper: f64 },

    #[error("descriptor parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_exponent(p: f64, min: f64) -> Result<()> {
    if p.is_finite() && p > min {
        Ok(())
    } else {
        Err(Error::InvalidExponent { p, min })
    }
}

pub(crate) fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be a positive finite number, got {v}"),
        })
    }
}
