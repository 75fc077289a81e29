//! Symmetry coefficients `α(h) = inf D_h(x,y)/D_h(y,x)`.
//!
//! For `|·|^p` with `p > 2` the infimum is the reciprocal of the maximum of the
//! one-dimensional ratio profile [`power_ratio`] over `(−1, 0)`. The profile is
//! quasiconcave there and its stationary point is the unique root in `[0, 1]`
//! of [`stationarity`], so α is computed by bisecting that function. Exponents
//! in `(1, 2)` reduce to the conjugate exponent, and `‖·‖₂^p`, `‖·‖_p^p` share
//! the value of `|·|^p` in every dimension. Sums of norm powers take the
//! smaller coefficient of the two extremal exponents.

mod bisection;

use std::fmt;

pub use bisection::{bisect, Bracket};

use crate::catalog::{abs_pow, Kind, NormKind, ReferenceFunction};
use crate::error::{check_exponent, check_positive, Error, Result};

/// Default bisection tolerance on the bracket width.
pub const DEFAULT_TOL: f64 = 1e-15;
/// Hard cap on bisection halvings.
pub const MAX_BISECTION_ITERATIONS: u32 = 200;
/// Bound on `|g(u0)|` expected of a bisection certificate for `p ≤ 10³`.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Bisection,
    SumRule,
    ConjugateReduction,
    PiecewiseFormula,
    PerfectSymmetry,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::ClosedForm => "ClosedForm",
            Method::Bisection => "Bisection",
            Method::SumRule => "SumRule",
            Method::ConjugateReduction => "ConjugateReduction",
            Method::PiecewiseFormula => "PiecewiseFormula",
            Method::PerfectSymmetry => "PerfectSymmetry",
        };
        f.write_str(s)
    }
}

/// A computed symmetry coefficient with the evidence behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCertificate {
    pub alpha: f64,
    /// Root in `(0, 1)` of the stationarity function; the profile maximizer is `−u0`.
    pub u0: Option<f64>,
    /// Exponent `u0` refers to (the conjugate exponent after a reduction).
    pub exponent: Option<f64>,
    pub method: Method,
    pub iterations: u32,
    /// `|g(u0)|` at termination, zero for closed forms.
    pub residual: f64,
}

impl SymmetryCertificate {
    pub fn perfect() -> Self {
        Self {
            alpha: 1.0,
            u0: None,
            exponent: None,
            method: Method::PerfectSymmetry,
            iterations: 0,
            residual: 0.0,
        }
    }

    fn formula(alpha: f64, method: Method) -> Self {
        Self {
            alpha,
            u0: None,
            exponent: None,
            method,
            iterations: 0,
            residual: 0.0,
        }
    }
}

/// Bounds `lower ≤ α ≤ upper` when no rule pins the value down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaInterval {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symmetry {
    Point(SymmetryCertificate),
    Interval(AlphaInterval),
}

impl Symmetry {
    pub fn point(&self) -> Option<f64> {
        match self {
            Symmetry::Point(c) => Some(c.alpha),
            Symmetry::Interval(_) => None,
        }
    }

    pub fn lower(&self) -> f64 {
        match self {
            Symmetry::Point(c) => c.alpha,
            Symmetry::Interval(i) => i.lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match self {
            Symmetry::Point(c) => c.alpha,
            Symmetry::Interval(i) => i.upper,
        }
    }
}

/// Ratio profile of `|·|^p`:
///
/// ```text
///            |u|^p − p·u + (p − 1)
/// f(u) = ------------------------------------    (u ≠ 1),   f(1) = 1
///        (p − 1)|u|^p − p·sgn(u)|u|^(p−1) + 1
/// ```
///
/// so that `f(x/y) = D(x,y)/D(y,x)` for `y ≠ 0`. `sgn(0) = 0`, hence `f(0) = p − 1`.
pub fn power_ratio(p: f64, u: f64) -> Result<f64> {
    check_exponent(p, 1.0)?;
    Ok(power_ratio_unchecked(p, u))
}

pub(crate) fn power_ratio_unchecked(p: f64, u: f64) -> f64 {
    if u == 1.0 {
        return 1.0;
    }
    let a = abs_pow(u, p);
    let sgn = if u == 0.0 { 0.0 } else { u.signum() };
    let num = a - p * u + (p - 1.0);
    let den = (p - 1.0) * a - p * sgn * abs_pow(u, p - 1.0) + 1.0;
    num / den
}

/// Stationarity function on `[0, 1]`, for `p > 2`:
/// `u^(2(p−1)) − (p−1)²u^p − 2p(p−2)u^(p−1) − (p−1)²u^(p−2) + 1`.
///
/// Positive at 0, equal to `4p(2 − p) < 0` at 1, with exactly one root between.
pub fn stationarity(p: f64, u: f64) -> Result<f64> {
    check_exponent(p, 2.0)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::OutsideDomain { u, r: f64::NAN });
    }
    Ok(stationarity_unchecked(p, u))
}

pub(crate) fn stationarity_unchecked(p: f64, u: f64) -> f64 {
    let pm1 = p - 1.0;
    abs_pow(u, 2.0 * pm1)
        - pm1 * pm1 * abs_pow(u, p)
        - 2.0 * p * (p - 2.0) * abs_pow(u, pm1)
        - pm1 * pm1 * abs_pow(u, p - 2.0)
        + 1.0
}

/// Ratio profile of `‖·‖₂^p` in terms of the norm ratio `u = ‖x‖/‖y‖` and the
/// cosine `r` between `x` and `y`:
/// `(u^p − p·r·u + (p−1)) / ((p−1)u^p − p·r·u^(p−1) + 1)`.
pub fn two_norm_ratio(p: f64, u: f64, r: f64) -> Result<f64> {
    check_exponent(p, 2.0)?;
    if !(u >= 0.0 && u.is_finite() && (-1.0..=1.0).contains(&r)) || (u == 1.0 && r == 1.0) {
        return Err(Error::OutsideDomain { u, r });
    }
    let up = abs_pow(u, p);
    Ok((up - p * r * u + (p - 1.0)) / ((p - 1.0) * up - p * r * abs_pow(u, p - 1.0) + 1.0))
}

/// Hölder conjugate `p/(p − 1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    check_exponent(p, 1.0)?;
    Ok(p / (p - 1.0))
}

/// α(|·|^p) for any `p > 1`, by bisection on the stationarity function.
///
/// `tol` bounds the width of the final bracket around the root.
pub fn alpha_power(p: f64, tol: f64) -> Result<SymmetryCertificate> {
    check_exponent(p, 1.0)?;
    check_positive("tol", tol)?;
    if p == 2.0 {
        return Ok(SymmetryCertificate::perfect());
    }
    let (q, method) = if p < 2.0 {
        (p / (p - 1.0), Method::ConjugateReduction)
    } else {
        (p, Method::Bisection)
    };
    if q <= 2.0 {
        // p sits within rounding of 2
        return Ok(SymmetryCertificate::perfect());
    }
    let bracket = bisect(
        |u| stationarity_unchecked(q, u),
        0.0,
        1.0,
        tol,
        MAX_BISECTION_ITERATIONS,
    );
    let u0 = bracket.midpoint();
    Ok(SymmetryCertificate {
        alpha: 1.0 / power_ratio_unchecked(q, -u0),
        u0: Some(u0),
        exponent: Some(q),
        method,
        iterations: bracket.iterations,
        residual: stationarity_unchecked(q, u0).abs(),
    })
}

/// `(1/(2p), 1/(p − 1))`, which strictly brackets α(|·|^p) for `p > 2`.
pub fn alpha_bounds(p: f64) -> Result<(f64, f64)> {
    check_exponent(p, 2.0)?;
    Ok((1.0 / (2.0 * p), 1.0 / (p - 1.0)))
}

/// One term `weight·‖·‖_r^p` of a sum of norm powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormTerm {
    pub weight: f64,
    pub p: f64,
    pub norm: NormKind,
}

impl NormTerm {
    pub fn new(weight: f64, p: f64, norm: NormKind) -> Self {
        Self { weight, p, norm }
    }
}

/// α of `Σ wᵢ‖·‖_{rᵢ}^{pᵢ}` on ℝ^dim with `rᵢ ∈ {2, pᵢ}`.
///
/// Equals `min{α(|·|^p_min), α(|·|^p_max)}` provided the smallest and the
/// largest exponent are each carried by a single term. Otherwise the rule does
/// not apply and [`Error::RuleNotApplicable`] carries the interval
/// `[min αᵢ, 1]`.
pub fn alpha_sum_mixed(terms: &[NormTerm], dim: usize, tol: f64) -> Result<SymmetryCertificate> {
    if terms.is_empty() {
        return Err(Error::InvalidParameter {
            name: "terms",
            reason: "a sum needs at least one term".into(),
        });
    }
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "dimension must be at least 1".into(),
        });
    }
    // Terms describing the same function collapse: any norm in one dimension,
    // and both norms at p = 2.
    let mut distinct: Vec<(f64, NormKind)> = Vec::new();
    for t in terms {
        check_positive("weight", t.weight)?;
        check_exponent(t.p, 1.0)?;
        let norm = if dim == 1 || t.p == 2.0 {
            NormKind::Two
        } else {
            t.norm
        };
        if !distinct.contains(&(t.p, norm)) {
            distinct.push((t.p, norm));
        }
    }
    distinct.sort_by(|a, b| a.0.total_cmp(&b.0));

    let first = distinct[0].0;
    if distinct.len() == 1 {
        return alpha_power(first, tol);
    }
    let last = distinct[distinct.len() - 1].0;
    let unique_ends =
        first < last && distinct[1].0 > first && distinct[distinct.len() - 2].0 < last;
    if !unique_ends {
        let mut lower = f64::INFINITY;
        for (p, _) in &distinct {
            lower = lower.min(alpha_power(*p, tol)?.alpha);
        }
        return Err(Error::RuleNotApplicable { lower, upper: 1.0 });
    }
    let lo = alpha_power(first, tol)?;
    let hi = alpha_power(last, tol)?;
    let best = if hi.alpha <= lo.alpha { hi } else { lo };
    Ok(SymmetryCertificate {
        method: Method::SumRule,
        ..best
    })
}

/// α of the piecewise quadratic `a·x²` (x ≥ 0), `b·x²` (x < 0):
/// `min{(1+√(a/b))/(1+√(b/a)), (1+√(b/a))/(1+√(a/b))}`.
pub fn alpha_piecewise_quadratic(a: f64, b: f64) -> Result<f64> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    let ra = (a / b).sqrt();
    let rb = (b / a).sqrt();
    let forward = (1.0 + ra) / (1.0 + rb);
    let backward = (1.0 + rb) / (1.0 + ra);
    Ok(forward.min(backward))
}

/// α of any catalog function.
///
/// Norm powers, quadratics, piecewise quadratics, affine images and eligible
/// sums of norm powers yield a point value. Other sums yield the interval
/// `[min αᵢ, upper]` where `upper = min{α(h_first), α(h_last)}` when every
/// summand is positively homogeneous and the extremal degrees are unique, and
/// `upper = 1` otherwise.
pub fn alpha_of(f: &ReferenceFunction, tol: f64) -> Result<Symmetry> {
    check_positive("tol", tol)?;
    let point = |c| Ok(Symmetry::Point(c));
    match f.kind() {
        Kind::PowerAbs { p, .. } | Kind::TwoNormPower { p, .. } | Kind::PNormPower { p, .. } => {
            point(alpha_power(*p, tol)?)
        }
        Kind::Quadratic(_) => point(SymmetryCertificate::perfect()),
        Kind::PiecewiseQuadratic { a, b } => {
            if a == b {
                point(SymmetryCertificate::perfect())
            } else {
                point(SymmetryCertificate::formula(
                    alpha_piecewise_quadratic(*a, *b)?,
                    Method::PiecewiseFormula,
                ))
            }
        }
        Kind::Affine(a) => alpha_of(&a.inner, tol),
        Kind::Sum(terms) => {
            if let Some(norm_terms) = terms.iter().map(as_norm_term).collect::<Option<Vec<_>>>() {
                return match alpha_sum_mixed(&norm_terms, f.dim(), tol) {
                    Ok(c) => point(c),
                    Err(Error::RuleNotApplicable { lower, upper }) => {
                        Ok(Symmetry::Interval(AlphaInterval { lower, upper }))
                    }
                    Err(e) => Err(e),
                };
            }
            sum_interval(terms, tol).map(Symmetry::Interval)
        }
    }
}

fn as_norm_term(f: &ReferenceFunction) -> Option<NormTerm> {
    match *f.kind() {
        Kind::PowerAbs { p, coeff } => Some(NormTerm::new(coeff, p, NormKind::Two)),
        Kind::TwoNormPower { p, coeff, .. } => Some(NormTerm::new(coeff, p, NormKind::Two)),
        Kind::PNormPower { p, coeff, .. } => Some(NormTerm::new(coeff, p, NormKind::PSelf)),
        _ => None,
    }
}

fn sum_interval(terms: &[ReferenceFunction], tol: f64) -> Result<AlphaInterval> {
    let mut parts = Vec::with_capacity(terms.len());
    for t in terms {
        parts.push((t.homogeneity_degree(), alpha_of(t, tol)?));
    }
    let lower = parts
        .iter()
        .map(|(_, s)| s.lower())
        .fold(f64::INFINITY, f64::min);

    let mut upper = 1.0;
    if let Some(mut degrees) = parts
        .iter()
        .map(|(d, s)| d.map(|d| (d, s.upper())))
        .collect::<Option<Vec<_>>>()
    {
        degrees.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = degrees.len();
        if n >= 2 && degrees[0].0 < degrees[1].0 && degrees[n - 2].0 < degrees[n - 1].0 {
            upper = degrees[0].1.min(degrees[n - 1].1);
        }
    }
    Ok(AlphaInterval { lower, upper })
}
