//! Real roots of polynomials up to degree four by radicals.

use std::f64::consts::PI;

/// Real roots of `c[0] + c[1]·v + … + c[d]·v^d` for `d ≤ 4`, unsorted and
/// possibly repeated. Returns `None` when the degree exceeds four.
pub fn real_roots(coeffs: &[f64]) -> Option<Vec<f64>> {
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let lead = *c.last()?;
    let m: Vec<f64> = c.iter().map(|x| x / lead).collect();
    match m.len() - 1 {
        0 => Some(Vec::new()),
        1 => Some(vec![-m[0]]),
        2 => Some(quadratic(m[1], m[0])),
        3 => Some(cubic(m[2], m[1], m[0])),
        4 => Some(quartic(m[3], m[2], m[1], m[0])),
        _ => None,
    }
}

/// Roots of `v² + b·v + c`.
fn quadratic(b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // q avoids cancellation between −b and ±√disc
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![q, c / q]
}

/// Roots of `v³ + a·v² + b·v + c`.
fn cubic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let roots = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if disc > 0.0 {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    } else {
        // three real roots, trigonometric form
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * PI * k as f64 / 3.0).cos())
            .collect()
    };
    roots.into_iter().map(|t| t - shift).collect()
}

/// Roots of `v⁴ + a·v³ + b·v² + c·v + d` (Ferrari).
fn quartic(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = a2 * a / 8.0 - a * b / 2.0 + c;
    let r = -3.0 * a2 * a2 / 256.0 + a2 * b / 16.0 - a * c / 4.0 + d;

    let scale = 1.0 + p.abs() + r.abs();
    let ys: Vec<f64> = if q.abs() <= 1e-14 * scale {
        // biquadratic
        quadratic(p, r)
            .into_iter()
            .filter(|z| *z >= 0.0)
            .flat_map(|z| [z.sqrt(), -z.sqrt()])
            .collect()
    } else {
        // y⁴ + p y² + q y + r = (y² + p/2 + m)² − 2m (y − q/(4m))²
        // for any root m of the resolvent cubic; the largest root is positive.
        let m = cubic(p, p * p / 4.0 - r, -q * q / 8.0)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        if m <= 0.0 {
            return Vec::new();
        }
        let s = (2.0 * m).sqrt();
        let base = p / 2.0 + m;
        let mut out = quadratic(-s, base + q / (2.0 * s));
        out.extend(quadratic(s, base - q / (2.0 * s)));
        out
    };
    ys.into_iter().map(|y| y - shift).collect()
}
