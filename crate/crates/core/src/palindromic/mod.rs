//! Exact integer structure of the stationarity polynomial for integer exponents.
//!
//! For integer `p ≥ 3` the stationarity function is the palindromic polynomial
//!
//! ```text
//! g_p(u) = u^(2(p−1)) − (p−1)²u^p − 2p(p−2)u^(p−1) − (p−1)²u^(p−2) + 1.
//! ```
//!
//! For even `p ≥ 4` it factors as `(u+1)⁴·h₁(u)·h₂(u)` where the product
//! `h₁h₂` has alternating tetrahedral-number coefficients. Both factors are
//! palindromic of even degree, so the substitution `v = u + 1/u` halves their
//! degree; up to `p = 10` the halved polynomials have degree at most four and
//! their roots, hence α(|·|^p), come out in radicals.

mod poly;
mod roots;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symmetry::{power_ratio_unchecked, Method, SymmetryCertificate};

pub use poly::IntegerPolynomial;
pub use roots::real_roots;

/// Bound on `|h̃(v)|` and `|g_p(u)|` accepted for a root obtained by radicals.
pub const ROOT_CHECK_TOL: f64 = 1e-10;

/// Triangular number `k(k+1)/2`. Negative `k` follow the same polynomial,
/// which keeps `T_k = T_{k−1} + k` valid for every integer.
pub fn triangular(k: i64) -> BigInt {
    let k = BigInt::from(k);
    &k * (&k + 1) / 2
}

/// Tetrahedral number `n(n+1)(n+2)/6`, extended polynomially to negative `n`
/// so that `Te_n = Te_{n−1} + T_n` holds throughout.
pub fn tetrahedral(n: i64) -> BigInt {
    let n = BigInt::from(n);
    &n * (&n + 1) * (&n + 2) / 6
}

fn check_even(p: u32) -> Result<()> {
    if p >= 4 && p.is_multiple_of(2) {
        Ok(())
    } else {
        Err(Error::UnsupportedExponent(p as f64))
    }
}

fn monomial_sum(len: usize, mut coeff: impl FnMut(usize) -> BigInt) -> IntegerPolynomial {
    IntegerPolynomial::new((0..len).map(&mut coeff).collect())
}

fn alternating(k: usize, v: BigInt) -> BigInt {
    if k.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Stationarity polynomial for any integer `p ≥ 3`.
pub fn stationarity_polynomial(p: u32) -> Result<IntegerPolynomial> {
    if p < 3 {
        return Err(Error::UnsupportedExponent(p as f64));
    }
    let p = p as usize;
    let pm1 = BigInt::from(p - 1);
    let mut c = vec![BigInt::zero(); 2 * (p - 1) + 1];
    c[0] = BigInt::one();
    c[2 * (p - 1)] = BigInt::one();
    c[p - 2] -= &pm1 * &pm1;
    c[p] -= &pm1 * &pm1;
    c[p - 1] -= BigInt::from(2 * p * (p - 2));
    Ok(IntegerPolynomial::new(c))
}

/// Stationarity polynomial for even `p ≥ 4`.
pub fn g_p_int(p: u32) -> Result<IntegerPolynomial> {
    check_even(p)?;
    stationarity_polynomial(p)
}

/// `Σ_{k=0}^{2(p−3)} (−1)^k Te_{min(k, 2(p−3)−k)+1} u^k`, the cofactor of `(u+1)⁴`.
pub fn tetrahedral_series(p: u32) -> Result<IntegerPolynomial> {
    check_even(p)?;
    let top = 2 * (p as usize - 3);
    Ok(monomial_sum(top + 1, |k| {
        alternating(k, tetrahedral(k.min(top - k) as i64 + 1))
    }))
}

/// `h₁(u) = Σ_{k=0}^{p−4} (−1)^k T_{min(k, p−4−k)+1} u^k`.
pub fn h1_int(p: u32) -> Result<IntegerPolynomial> {
    check_even(p)?;
    let top = p as usize - 4;
    Ok(monomial_sum(top + 1, |k| {
        alternating(k, triangular(k.min(top - k) as i64 + 1))
    }))
}

/// `h₂(u) = (−1)^(p/2−1)(p−1)u^(p/2−1) + Σ_{i=0}^{p−2} (−1)^i u^i`.
pub fn h2_int(p: u32) -> Result<IntegerPolynomial> {
    check_even(p)?;
    let mid = p as usize / 2 - 1;
    Ok(monomial_sum(p as usize - 1, |i| {
        let extra = if i == mid {
            BigInt::from(p - 1)
        } else {
            BigInt::zero()
        };
        alternating(i, BigInt::one() + extra)
    }))
}

/// Verifies in exact arithmetic that `g_p = (u+1)⁴·h₁·h₂`, and that both
/// `(u+1)⁴·S = g_p` and `h₁·h₂ = S` hold for the tetrahedral series `S`.
pub fn factor_check(p: u32) -> Result<bool> {
    let g = g_p_int(p)?;
    let series = tetrahedral_series(p)?;
    let h1 = h1_int(p)?;
    let h2 = h2_int(p)?;
    let quartic = IntegerPolynomial::from_i64(&[1, 1]).pow(4);
    let product = &h1 * &h2;
    Ok(product == series && &quartic * &series == g && &quartic * &product == g)
}

/// Degree-halving substitution for palindromic polynomials: returns `h̃` with
/// `poly(u) = u^(d/2)·h̃(u + 1/u)` for all `u ≠ 0`.
///
/// Uses `u^k + u^(−k) = P_k(v)` with `P₀ = 2`, `P₁ = v`, `P_k = v·P_{k−1} − P_{k−2}`.
pub fn half_substitution(poly: &IntegerPolynomial) -> Result<IntegerPolynomial> {
    let Some(d) = poly.degree() else {
        return Ok(IntegerPolynomial::zero());
    };
    if d % 2 != 0 || !poly.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    let m = d / 2;
    let v = IntegerPolynomial::from_i64(&[0, 1]);
    let mut prev = IntegerPolynomial::from_i64(&[2]);
    let mut cur = v.clone();
    let mut acc = vec![BigInt::zero(); m + 1];
    acc[0] = poly.coeff(m);
    for k in 1..=m {
        let c = poly.coeff(m - k);
        for (i, pk) in cur.coeffs().iter().enumerate() {
            acc[i] += &c * pk;
        }
        let next = sub(&(&v * &cur), &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(IntegerPolynomial::new(acc))
}

fn sub(a: &IntegerPolynomial, b: &IntegerPolynomial) -> IntegerPolynomial {
    let n = a.coeffs().len().max(b.coeffs().len());
    IntegerPolynomial::new((0..n).map(|i| a.coeff(i) - b.coeff(i)).collect())
}

/// Maps `v ≥ 2` back to the solution of `u + 1/u = v` in `(0, 1]`.
fn root_from_sum(v: f64) -> f64 {
    2.0 / (v + (v * v - 4.0).max(0.0).sqrt())
}

/// Roots `u ∈ (0, 1)` of a palindromic factor, found through the halved
/// polynomial by radicals and checked against both polynomials.
fn unit_roots(factor: &IntegerPolynomial) -> Result<Vec<f64>> {
    let reduced = half_substitution(factor)?;
    let Some(vs) = real_roots(&reduced.to_f64()) else {
        return Err(Error::RootNotFound(format!(
            "reduced polynomial {reduced} has degree above four"
        )));
    };
    Ok(vs
        .into_iter()
        .filter(|v| *v > 2.0 && reduced.eval(*v).abs() <= ROOT_CHECK_TOL)
        .map(root_from_sum)
        .collect())
}

/// The unique root in `(0, 1)` of the stationarity polynomial, by radicals.
///
/// Supported for `p = 3` (the quartic itself is palindromic) and even
/// `p ∈ {4, 6, 8, 10}`, where both factors are searched since the root may
/// sit in either.
pub fn closed_form_root(p: u32) -> Result<f64> {
    let g = stationarity_polynomial(p)?;
    let factors = match p {
        3 => vec![g.clone()],
        4 | 6 | 8 | 10 => vec![h1_int(p)?, h2_int(p)?],
        _ => return Err(Error::UnsupportedExponent(p as f64)),
    };
    let mut candidates: Vec<f64> = Vec::new();
    for f in &factors {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        for u in unit_roots(f)? {
            if g.eval(u).abs() <= ROOT_CHECK_TOL && !candidates.iter().any(|c| (c - u).abs() < 1e-9)
            {
                candidates.push(u);
            }
        }
    }
    match candidates.as_slice() {
        [u] => Ok(*u),
        _ => Err(Error::RootNotFound(format!(
            "expected one root in (0, 1) for p = {p}, found {candidates:?}"
        ))),
    }
}

/// α(|·|^p) from its radical expression, for `p ∈ {2, 3, 4, 6, 8, 10}`.
///
/// For `p = 3` the value is recovered from the root of the quartic and
/// checked against `(1 − √2·3^(1/4) + √3)/2`.
pub fn closed_form_alpha(p: u32) -> Result<f64> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    match p {
        2 => Ok(1.0),
        3 => {
            let radical = (1.0 - s2 * 3f64.powf(0.25) + s3) / 2.0;
            let u0 = closed_form_root(3)?;
            let alpha = 1.0 / power_ratio_unchecked(3.0, -u0);
            if ((alpha - radical) / radical).abs() > 1e-12 {
                return Err(Error::RootNotFound(format!(
                    "quartic route gives {alpha}, radical gives {radical}"
                )));
            }
            Ok(alpha)
        }
        4 => Ok(2.0 - s3),
        6 => Ok((7.0 - 3.0 * 5f64.sqrt()) / 2.0),
        8 => {
            let lo = (7.0 * (13.0 - 9.0 * s2)).cbrt();
            let hi = (7.0 * (13.0 + 9.0 * s2)).cbrt();
            let b1 = 1.0 + 7f64.cbrt() * ((13.0 - 9.0 * s2).cbrt() + (13.0 + 9.0 * s2).cbrt());
            let b2 = (b1 * b1 - 36.0).sqrt();
            let b3 = b1 + b2;
            let num = 13_996_800.0 + 2_239_488.0 * (b2 + lo + hi) + b3.powi(8);
            let den = 1_679_616.0 + 48.0 * b3.powi(7) + 7.0 * b3.powi(8);
            Ok(num / den)
        }
        10 => {
            let c = 3f64.cbrt();
            let c2 = c * c;
            let num = 201.0 + 23.0 * c2 + 126.0 * c
                - (135.0 + 50.0 * c2 + 45.0 * c) * (c2 + 2.0 * c - 3.0).sqrt();
            let den = 2.0 * (c2 + 12.0 * (1.0 + c));
            Ok(num / den)
        }
        _ => Err(Error::UnsupportedExponent(p as f64)),
    }
}

/// Certificate for a closed-form exponent, carrying the radical root as `u0`.
pub fn closed_form_certificate(p: u32) -> Result<SymmetryCertificate> {
    if p == 2 {
        return Ok(SymmetryCertificate::perfect());
    }
    let alpha = closed_form_alpha(p)?;
    let u0 = closed_form_root(p)?;
    let residual = stationarity_polynomial(p)?.eval(u0).abs();
    Ok(SymmetryCertificate {
        alpha,
        u0: Some(u0),
        exponent: Some(p as f64),
        method: Method::ClosedForm,
        iterations: 0,
        residual,
    })
}
