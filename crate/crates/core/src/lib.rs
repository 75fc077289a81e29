//! Symmetry coefficients of Legendre reference functions.
//!
//! For a Legendre function `h` the symmetry coefficient is
//! `α(h) = inf { D_h(x,y) / D_h(y,x) : x ≠ y }`, where `D_h` is the Bregman
//! distance. The crate computes it for a catalog of positively homogeneous
//! functions, in closed form where radicals exist and by bisection otherwise,
//! and ships a sampling oracle for independent checks.
//!
//! ```
//! use bregman_symmetry::{alpha_power, DEFAULT_TOL};
//!
//! let cert = alpha_power(4.0, DEFAULT_TOL).unwrap();
//! assert!((cert.alpha - (2.0 - 3f64.sqrt())).abs() < 1e-12);
//! ```

pub mod catalog;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod palindromic;
pub mod symmetry;

pub use catalog::{parse_descriptor, Kind, NormKind, ReferenceFunction};
pub use error::{Error, Result};
pub use oracle::{alpha_grid_1d, alpha_sample_nd, quasiconcavity_check, OracleEstimate};
pub use palindromic::{closed_form_alpha, factor_check, IntegerPolynomial};
pub use symmetry::{
    alpha_bounds, alpha_of, alpha_piecewise_quadratic, alpha_power, alpha_sum_mixed,
    conjugate_exponent, power_ratio, stationarity, two_norm_ratio, AlphaInterval, Method, NormTerm,
    Symmetry, SymmetryCertificate, DEFAULT_TOL,
};
