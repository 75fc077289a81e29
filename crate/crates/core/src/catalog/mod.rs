//! Legendre reference functions with full domain.
//!
//! Every function in the catalog is a finite, strictly convex, differentiable
//! function on all of ℝⁿ. Values, gradients and Bregman distances are computed
//! directly from the closed-form expression of each family.

mod descriptor;

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_exponent, check_positive, Error, Result};

pub use descriptor::parse_descriptor;

/// `|x|^p` with an exact zero at the origin.
#[inline]
pub(crate) fn abs_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().powf(p)
    }
}

/// `sgn(x)|x|^p`, the odd extension of [`abs_pow`].
#[inline]
fn signed_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p)
    }
}

fn two_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Whether a positive-homogeneous norm power measures with the Euclidean norm
/// or with its own exponent (`‖x‖_p^p`, which is separable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    Two,
    PSelf,
}

/// Dense quadratic `½⟨x,Qx⟩ + ⟨b,x⟩ + c` with `Q` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub q: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: f64,
}

/// `scale·h(Lx − x0) + ⟨b,x⟩ + c` for a nonsingular `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub inner: ReferenceFunction,
    pub l: DMatrix<f64>,
    pub x0: DVector<f64>,
    pub b: DVector<f64>,
    pub c: f64,
    pub scale: f64,
}

/// The family a [`ReferenceFunction`] belongs to, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    /// `coeff·|x|^p` on ℝ.
    PowerAbs {
        p: f64,
        coeff: f64,
    },
    /// `coeff·‖x‖₂^p` on ℝ^dim.
    TwoNormPower {
        p: f64,
        dim: usize,
        coeff: f64,
    },
    /// `coeff·‖x‖_p^p = coeff·Σ|xᵢ|^p` on ℝ^dim.
    PNormPower {
        p: f64,
        dim: usize,
        coeff: f64,
    },
    Quadratic(Quadratic),
    /// `a·x²` for `x ≥ 0`, `b·x²` otherwise.
    PiecewiseQuadratic {
        a: f64,
        b: f64,
    },
    /// Sum of terms; positive weights are already folded into each term.
    Sum(Vec<ReferenceFunction>),
    Affine(Box<Affine>),
}

/// A validated Legendre function from the catalog.
///
/// Instances can only be obtained through the checked constructors, so every
/// exponent exceeds one, every quadratic is positive definite, every affine map
/// is invertible and all summands share one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFunction(Kind);

impl ReferenceFunction {
    pub fn power_abs(p: f64, coeff: f64) -> Result<Self> {
        check_exponent(p, 1.0)?;
        check_positive("coeff", coeff)?;
        Ok(Self(Kind::PowerAbs { p, coeff }))
    }

    pub fn two_norm_power(p: f64, dim: usize, coeff: f64) -> Result<Self> {
        check_exponent(p, 1.0)?;
        check_dim(dim)?;
        check_positive("coeff", coeff)?;
        Ok(Self(Kind::TwoNormPower { p, dim, coeff }))
    }

    pub fn p_norm_power(p: f64, dim: usize, coeff: f64) -> Result<Self> {
        check_exponent(p, 1.0)?;
        check_dim(dim)?;
        check_positive("coeff", coeff)?;
        Ok(Self(Kind::PNormPower { p, dim, coeff }))
    }

    /// Builds `½⟨x,Qx⟩ + ⟨b,x⟩ + c`. `Q` must be symmetric positive definite.
    pub fn quadratic(q: DMatrix<f64>, b: DVector<f64>, c: f64) -> Result<Self> {
        let n = q.nrows();
        check_dim(n)?;
        if q.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: q.ncols(),
            });
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        if !c.is_finite() || q.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "quadratic",
                reason: "entries must be finite".into(),
            });
        }
        let scale = q.amax().max(1.0);
        if (&q - q.transpose()).amax() > 1e-12 * scale {
            return Err(Error::NotPositiveDefinite);
        }
        if q.clone().cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self(Kind::Quadratic(Quadratic { q, b, c })))
    }

    /// `½‖x‖₂²` on ℝⁿ.
    pub fn half_squared_norm(dim: usize) -> Result<Self> {
        Self::quadratic(DMatrix::identity(dim, dim), DVector::zeros(dim), 0.0)
    }

    pub fn piecewise_quadratic(a: f64, b: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("b", b)?;
        Ok(Self(Kind::PiecewiseQuadratic { a, b }))
    }

    /// Weighted sum `Σ wᵢ·fᵢ`.
    ///
    /// Nested sums are flattened, weights are folded into the summands and
    /// norm-power terms of the same family, exponent and dimension are merged.
    /// A sum that collapses to a single term is returned as that term.
    pub fn scaled_sum(terms: Vec<(f64, ReferenceFunction)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter {
                name: "terms",
                reason: "a sum needs at least one term".into(),
            });
        }
        let dim = terms[0].1.dim();
        let mut flat: Vec<ReferenceFunction> = Vec::new();
        for (w, f) in terms {
            check_positive("weight", w)?;
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.dim(),
                });
            }
            match f.0 {
                Kind::Sum(inner) => {
                    for g in inner {
                        push_merged(&mut flat, g.scaled(w));
                    }
                }
                _ => push_merged(&mut flat, f.scaled(w)),
            }
        }
        if flat.len() == 1 {
            return Ok(flat.pop().unwrap());
        }
        Ok(Self(Kind::Sum(flat)))
    }

    /// `scale·inner(Lx − x0) + ⟨b,x⟩ + c`.
    pub fn affine_image(
        inner: ReferenceFunction,
        l: DMatrix<f64>,
        x0: DVector<f64>,
        b: DVector<f64>,
        c: f64,
        scale: f64,
    ) -> Result<Self> {
        let n = inner.dim();
        for got in [l.nrows(), l.ncols(), x0.len(), b.len()] {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        check_positive("scale", scale)?;
        if !c.is_finite()
            || l.iter()
                .chain(x0.iter())
                .chain(b.iter())
                .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "affine",
                reason: "entries must be finite".into(),
            });
        }
        if l.clone().try_inverse().is_none() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self(Kind::Affine(Box::new(Affine {
            inner,
            l,
            x0,
            b,
            c,
            scale,
        }))))
    }

    pub fn kind(&self) -> &Kind {
        &self.0
    }

    /// Ambient dimension n of the domain ℝⁿ.
    pub fn dim(&self) -> usize {
        match &self.0 {
            Kind::PowerAbs { .. } | Kind::PiecewiseQuadratic { .. } => 1,
            Kind::TwoNormPower { dim, .. } | Kind::PNormPower { dim, .. } => *dim,
            Kind::Quadratic(q) => q.b.len(),
            Kind::Sum(terms) => terms[0].dim(),
            Kind::Affine(a) => a.inner.dim(),
        }
    }

    /// Multiplies the function by a positive constant, keeping it in canonical form.
    fn scaled(self, w: f64) -> Self {
        if w == 1.0 {
            return self;
        }
        let kind = match self.0 {
            Kind::PowerAbs { p, coeff } => Kind::PowerAbs {
                p,
                coeff: coeff * w,
            },
            Kind::TwoNormPower { p, dim, coeff } => Kind::TwoNormPower {
                p,
                dim,
                coeff: coeff * w,
            },
            Kind::PNormPower { p, dim, coeff } => Kind::PNormPower {
                p,
                dim,
                coeff: coeff * w,
            },
            Kind::Quadratic(q) => Kind::Quadratic(Quadratic {
                q: q.q * w,
                b: q.b * w,
                c: q.c * w,
            }),
            Kind::PiecewiseQuadratic { a, b } => Kind::PiecewiseQuadratic { a: a * w, b: b * w },
            Kind::Sum(terms) => Kind::Sum(terms.into_iter().map(|t| t.scaled(w)).collect()),
            Kind::Affine(mut a) => {
                a.scale *= w;
                a.b *= w;
                a.c *= w;
                Kind::Affine(a)
            }
        };
        Self(kind)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Value h(x).
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.value_unchecked(x))
    }

    /// Gradient ∇h(x). Norm powers with exponent below two use the limiting
    /// value 0 at the origin.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        Ok(self.gradient_unchecked(x))
    }

    /// Bregman distance `D_h(x, y) = h(x) − h(y) − ⟨∇h(y), x − y⟩`.
    ///
    /// Rounding can push the difference slightly below zero for nearly equal
    /// points; the result is clamped at zero.
    pub fn bregman(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.bregman_unchecked(x, y))
    }

    pub(crate) fn bregman_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        if x == y {
            return 0.0;
        }
        let gy = self.gradient_unchecked(y);
        let inner: f64 = gy
            .iter()
            .zip(x.iter().zip(y))
            .map(|(g, (a, b))| g * (a - b))
            .sum();
        let d = self.value_unchecked(x) - self.value_unchecked(y) - inner;
        d.max(0.0)
    }

    /// Degree of positive homogeneity, when the whole function has one.
    pub fn homogeneity_degree(&self) -> Option<f64> {
        match &self.0 {
            Kind::PowerAbs { p, .. }
            | Kind::TwoNormPower { p, .. }
            | Kind::PNormPower { p, .. } => Some(*p),
            Kind::Quadratic(q) => (q.c == 0.0 && q.b.iter().all(|v| *v == 0.0)).then_some(2.0),
            Kind::PiecewiseQuadratic { .. } => Some(2.0),
            Kind::Sum(terms) => {
                let first = terms[0].homogeneity_degree()?;
                terms[1..]
                    .iter()
                    .all(|t| t.homogeneity_degree() == Some(first))
                    .then_some(first)
            }
            Kind::Affine(a) => {
                let linear_free =
                    a.c == 0.0 && a.b.iter().all(|v| *v == 0.0) && a.x0.iter().all(|v| *v == 0.0);
                if linear_free {
                    a.inner.homogeneity_degree()
                } else {
                    None
                }
            }
        }
    }

    fn value_unchecked(&self, x: &[f64]) -> f64 {
        match &self.0 {
            Kind::PowerAbs { p, coeff } => coeff * abs_pow(x[0], *p),
            Kind::TwoNormPower { p, coeff, .. } => coeff * abs_pow(two_norm(x), *p),
            Kind::PNormPower { p, coeff, .. } => {
                coeff * x.iter().map(|v| abs_pow(*v, *p)).sum::<f64>()
            }
            Kind::Quadratic(q) => {
                let xv = DVector::from_column_slice(x);
                0.5 * xv.dot(&(&q.q * &xv)) + q.b.dot(&xv) + q.c
            }
            Kind::PiecewiseQuadratic { a, b } => {
                let t = x[0];
                if t >= 0.0 {
                    a * t * t
                } else {
                    b * t * t
                }
            }
            Kind::Sum(terms) => terms.iter().map(|t| t.value_unchecked(x)).sum(),
            Kind::Affine(a) => {
                let xv = DVector::from_column_slice(x);
                let z = &a.l * &xv - &a.x0;
                a.scale * a.inner.value_unchecked(z.as_slice()) + a.b.dot(&xv) + a.c
            }
        }
    }

    fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        match &self.0 {
            Kind::PowerAbs { p, coeff } => vec![coeff * p * signed_pow(x[0], p - 1.0)],
            Kind::TwoNormPower { p, coeff, .. } => {
                let r = two_norm(x);
                if r == 0.0 {
                    return vec![0.0; x.len()];
                }
                let factor = coeff * p * r.powf(p - 2.0);
                x.iter().map(|v| factor * v).collect()
            }
            Kind::PNormPower { p, coeff, .. } => x
                .iter()
                .map(|v| coeff * p * signed_pow(*v, p - 1.0))
                .collect(),
            Kind::Quadratic(q) => {
                let xv = DVector::from_column_slice(x);
                (&q.q * xv + &q.b).as_slice().to_vec()
            }
            Kind::PiecewiseQuadratic { a, b } => {
                let t = x[0];
                vec![if t >= 0.0 { 2.0 * a * t } else { 2.0 * b * t }]
            }
            Kind::Sum(terms) => {
                let mut g = vec![0.0; x.len()];
                for t in terms {
                    for (gi, ti) in g.iter_mut().zip(t.gradient_unchecked(x)) {
                        *gi += ti;
                    }
                }
                g
            }
            Kind::Affine(a) => {
                let xv = DVector::from_column_slice(x);
                let z = &a.l * &xv - &a.x0;
                let gz = DVector::from_vec(a.inner.gradient_unchecked(z.as_slice()));
                (a.l.transpose() * gz * a.scale + &a.b).as_slice().to_vec()
            }
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "dimension must be at least 1".into(),
        });
    }
    Ok(())
}

/// Appends `f` to a flattened sum, merging it into an existing norm-power term
/// of the same family, exponent and dimension.
fn push_merged(flat: &mut Vec<ReferenceFunction>, f: ReferenceFunction) {
    for existing in flat.iter_mut() {
        match (&mut existing.0, &f.0) {
            (Kind::PowerAbs { p, coeff }, Kind::PowerAbs { p: q, coeff: c }) if p == q => {
                *coeff += c;
                return;
            }
            (
                Kind::TwoNormPower { p, dim, coeff },
                Kind::TwoNormPower {
                    p: q,
                    dim: d,
                    coeff: c,
                },
            )
            | (
                Kind::PNormPower { p, dim, coeff },
                Kind::PNormPower {
                    p: q,
                    dim: d,
                    coeff: c,
                },
            ) if p == q && dim == d => {
                *coeff += c;
                return;
            }
            _ => {}
        }
    }
    flat.push(f);
}

impl fmt::Display for ReferenceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Kind::PowerAbs { p, coeff } => write!(f, "{coeff}*abs_pow(p={p})"),
            Kind::TwoNormPower { p, dim, coeff } => {
                write!(f, "{coeff}*two_norm_pow(p={p},dim={dim})")
            }
            Kind::PNormPower { p, dim, coeff } => write!(f, "{coeff}*p_norm_pow(p={p},dim={dim})"),
            Kind::Quadratic(q) => write!(f, "quad(dim={})", q.b.len()),
            Kind::PiecewiseQuadratic { a, b } => write!(f, "pw_quad(a={a},b={b})"),
            Kind::Sum(terms) => {
                write!(f, "sum(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Kind::Affine(a) => write!(f, "affine({}, scale={})", a.inner, a.scale),
        }
    }
}
