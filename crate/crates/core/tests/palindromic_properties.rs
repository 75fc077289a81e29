use bregman_symmetry::palindromic::{
    closed_form_alpha, closed_form_root, factor_check, g_p_int, h1_int, h2_int, half_substitution,
    stationarity_polynomial, tetrahedral, tetrahedral_series, triangular, IntegerPolynomial,
};
use bregman_symmetry::symmetry::stationarity;
use bregman_symmetry::{alpha_power, power_ratio, DEFAULT_TOL};
use num_bigint::BigInt;
use proptest::prelude::*;

fn test_polynomials() -> Vec<IntegerPolynomial> {
    let mut polys = vec![
        IntegerPolynomial::from_i64(&[1, -4, 1]),
        IntegerPolynomial::from_i64(&[3, 0, -7, 0, 3]),
        IntegerPolynomial::from_i64(&[1, 2, -5, 2, 1]),
        IntegerPolynomial::from_i64(&[2, -1, 4, 9, 4, -1, 2]),
    ];
    for p in [4, 6, 8, 10, 12] {
        polys.push(h1_int(p).unwrap());
        polys.push(h2_int(p).unwrap());
        polys.push(g_p_int(p).unwrap());
    }
    polys
}

proptest! {
    #[test]
    fn substitution_identity(i in 0usize..19, u in 0.1f64..3.0) {
        let poly = &test_polynomials()[i];
        let half = half_substitution(poly).unwrap();
        let d = poly.degree().unwrap() as i32;
        let lhs = poly.eval(u);
        let rhs = u.powi(d / 2) * half.eval(u + 1.0 / u);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), "{poly}: {lhs} vs {rhs}");
    }
}

#[test]
fn factorizations_are_exact() {
    for p in (4..=20).step_by(2) {
        assert!(factor_check(p).unwrap(), "p={p}");
    }
    assert!(factor_check(5).is_err());
}

#[test]
fn every_polynomial_is_palindromic() {
    for p in (4..=20).step_by(2) {
        assert!(g_p_int(p).unwrap().is_palindromic());
        assert!(h1_int(p).unwrap().is_palindromic());
        assert!(h2_int(p).unwrap().is_palindromic());
        assert!(tetrahedral_series(p).unwrap().is_palindromic());
    }
    assert!(stationarity_polynomial(3).unwrap().is_palindromic());
    assert!(stationarity_polynomial(7).unwrap().is_palindromic());
}

#[test]
fn integer_polynomial_matches_float_stationarity() {
    for p in [3u32, 4, 5, 8, 11] {
        let g = stationarity_polynomial(p).unwrap();
        for i in 0..=20 {
            let u = i as f64 / 20.0;
            let direct = stationarity(p as f64, u).unwrap();
            assert!(
                (g.eval(u) - direct).abs() <= 1e-9 * (1.0 + direct.abs()),
                "p={p} u={u}"
            );
        }
    }
}

#[test]
fn roots_agree_with_bisection() {
    for p in [3u32, 4, 6, 8, 10] {
        let u0 = closed_form_root(p).unwrap();
        assert!(u0 > 0.0 && u0 < 1.0);
        assert!(
            stationarity_polynomial(p).unwrap().eval(u0).abs() <= 1e-10,
            "p={p}"
        );
        let from_root = 1.0 / power_ratio(p as f64, -u0).unwrap();
        let exact = closed_form_alpha(p).unwrap();
        let bis = alpha_power(p as f64, DEFAULT_TOL).unwrap().alpha;
        assert!((from_root - exact).abs() <= 1e-10, "p={p}");
        assert!((from_root - bis).abs() <= 1e-10, "p={p}");
    }
}

#[test]
fn figurate_recurrences() {
    for n in -5i64..=50 {
        assert_eq!(triangular(n), triangular(n - 1) + BigInt::from(n), "T_{n}");
        assert_eq!(tetrahedral(n), tetrahedral(n - 1) + triangular(n), "Te_{n}");
    }
    assert_eq!(tetrahedral(50), BigInt::from(22100));
}
