//! Acceptance gate. Every criterion runs even when an earlier one fails; each
//! prints one PASS/FAIL line and the test fails if any line is FAIL.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.

use std::time::{Duration, Instant};

use bregman_symmetry::cli::{counterexample_ratio, sweep, Spacing};
use bregman_symmetry::oracle::alpha_grid_1d;
use bregman_symmetry::symmetry::stationarity;
use bregman_symmetry::{
    alpha_bounds, alpha_of, alpha_piecewise_quadratic, alpha_power, alpha_sample_nd,
    closed_form_alpha, factor_check, power_ratio, quasiconcavity_check, two_norm_ratio,
    ReferenceFunction, Symmetry, DEFAULT_TOL,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHA4: f64 = 0.267_949_192_431_122_7;

struct Report {
    lines: Vec<(String, bool)>,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, outcome: Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let line = format!(
            "[{}] criterion {id:>2} {name}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
        println!("{line}");
        self.lines.push((line, passed));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn alpha(p: f64) -> Result<f64, String> {
    alpha_power(p, DEFAULT_TOL)
        .map(|c| c.alpha)
        .map_err(|e| format!("p={p}: {e}"))
}

fn c01_closed_forms() -> Result<String, String> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let expected = [
        (2.0, 1.0),
        (3.0, (1.0 - s2 * 3f64.powf(0.25) + s3) / 2.0),
        (4.0, 2.0 - s3),
        (6.0, (7.0 - 3.0 * 5f64.sqrt()) / 2.0),
    ];
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for (p, want) in expected {
        let (got, dt) = timed(|| alpha(p));
        let got = got?;
        worst = worst.max((got - want).abs());
        slowest = slowest.max(dt);
        ensure((got - want).abs() <= 1e-12, || {
            format!("p={p}: {got} vs {want}")
        })?;
        ensure(dt < Duration::from_millis(10), || {
            format!("p={p} took {dt:?}")
        })?;
    }
    Ok(format!("max error {worst:.1e}, slowest {slowest:?}"))
}

fn c02_radical_values() -> Result<String, String> {
    let mut parts = Vec::new();
    for (p, approx) in [(8u32, 0.0982), (10, 0.0733)] {
        let a = alpha(p as f64)?;
        let exact = closed_form_alpha(p).map_err(|e| e.to_string())?;
        ensure((a - approx).abs() <= 5e-5, || {
            format!("p={p}: {a} vs {approx}")
        })?;
        ensure((a - exact).abs() <= 1e-10, || {
            format!("p={p}: {a} vs closed form {exact}")
        })?;
        parts.push(format!(
            "p={p} α={a:.6} |Δ closed|={:.1e}",
            (a - exact).abs()
        ));
    }
    Ok(parts.join("; "))
}

fn c03_conjugacy() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p: f64 = rng.random_range(1.0..2.0);
        if p == 1.0 {
            continue;
        }
        let q = p / (p - 1.0);
        let d = (alpha(p)? - alpha(q)?).abs();
        worst = worst.max(d);
        ensure(d <= 1e-12, || format!("p={p}, q={q}: difference {d:e}"))?;
    }
    Ok(format!("20 exponents, max difference {worst:.1e}"))
}

fn c04_sweep() -> Result<String, String> {
    let (rows, dt) = timed(|| sweep(2.0, 1000.0, 200, Spacing::Log, DEFAULT_TOL));
    let rows = rows.map_err(|e| e.to_string())?;
    ensure(rows.len() == 200, || format!("{} rows", rows.len()))?;
    ensure(rows[0].p == 2.0 && rows[0].alpha == 1.0, || {
        format!("first row {:?}", rows[0])
    })?;
    for w in rows.windows(2) {
        ensure(w[1].alpha < w[0].alpha, || {
            format!("not decreasing at p={}", w[1].p)
        })?;
    }
    for r in rows.iter().filter(|r| r.p > 2.0) {
        let lo = 1.0 / (2.0 * r.p);
        let hi = 1.0 / (r.p - 1.0);
        ensure(lo < r.alpha && r.alpha <= hi, || {
            format!("p={}: α={} outside ({lo}, {hi}]", r.p, r.alpha)
        })?;
    }
    ensure(dt < Duration::from_secs(5), || format!("sweep took {dt:?}"))?;
    Ok(format!(
        "200 rows strictly decreasing and sandwiched, {dt:?}"
    ))
}

fn c05_asymptotic() -> Result<String, String> {
    let rows = sweep(2.0, 1000.0, 200, Spacing::Log, DEFAULT_TOL).map_err(|e| e.to_string())?;
    for r in &rows {
        let ratio = 2.0 * r.p * r.alpha;
        ensure(ratio > 1.0, || format!("r({}) = {ratio}", r.p))?;
    }
    let r10 = 20.0 * alpha(10.0)?;
    let r1000 = 2000.0 * alpha(1000.0)?;
    ensure(r1000 < r10, || format!("r(1000)={r1000} ≥ r(10)={r10}"))?;
    Ok(format!(
        "r > 1 on all rows, r(10)={r10:.4}, r(1000)={r1000:.4}"
    ))
}

fn c06_factorization() -> Result<String, String> {
    for p in (4u32..=20).step_by(2) {
        let ok = factor_check(p).map_err(|e| format!("p={p}: {e}"))?;
        ensure(ok, || format!("p={p} mismatch"))?;
    }
    Ok("p = 4, 6, ..., 20 exact".into())
}

fn c07_grid_oracle() -> Result<String, String> {
    let mut worst = 0.0f64;
    for p in [3.0, 4.0, 6.0, 8.0, 10.0, 50.0] {
        let est = alpha_grid_1d(p, 100_000).map_err(|e| e.to_string())?;
        let d = (est.alpha_hat - alpha(p)?).abs();
        worst = worst.max(d);
        ensure(d <= 1e-8, || {
            format!("p={p}: grid {} differs by {d:e}", est.alpha_hat)
        })?;
    }
    Ok(format!("max difference {worst:.1e}"))
}

fn c08_dimension_independence() -> Result<String, String> {
    let mut cases = Vec::new();
    for dim in [1, 2, 3, 5] {
        cases.push((
            format!("‖·‖₂⁴ n={dim}"),
            ReferenceFunction::two_norm_power(4.0, dim, 1.0),
        ));
    }
    cases.push((
        "‖·‖₄⁴ n=2".into(),
        ReferenceFunction::p_norm_power(4.0, 2, 1.0),
    ));
    let start = Instant::now();
    let mut parts = Vec::new();
    for (seed, (name, f)) in cases.into_iter().enumerate() {
        let f = f.map_err(|e| e.to_string())?;
        let est = alpha_sample_nd(&f, 100_000, seed as u64 + 1, 1).map_err(|e| e.to_string())?;
        let a = est.alpha_hat;
        ensure((a - ALPHA4).abs() <= 2e-3, || format!("{name}: {a}"))?;
        ensure(a >= ALPHA4 - 1e-12, || {
            format!("{name}: {a} below the infimum")
        })?;
        parts.push(format!("{name} {:+.1e}", a - ALPHA4));
    }
    let dt = start.elapsed();
    ensure(dt < Duration::from_secs(30), || format!("took {dt:?}"))?;
    Ok(format!("{} ({dt:?})", parts.join(", ")))
}

fn c09_sum_rules() -> Result<String, String> {
    let mut parts = Vec::new();
    for (i, (beta, gamma)) in [(1.0, 1.0), (0.1, 10.0), (50.0, 0.02)]
        .into_iter()
        .enumerate()
    {
        let f = ReferenceFunction::scaled_sum(vec![
            (
                beta / 4.0,
                ReferenceFunction::two_norm_power(4.0, 2, 1.0).unwrap(),
            ),
            (
                gamma / 2.0,
                ReferenceFunction::two_norm_power(2.0, 2, 1.0).unwrap(),
            ),
        ])
        .map_err(|e| e.to_string())?;
        let a = match alpha_of(&f, DEFAULT_TOL).map_err(|e| e.to_string())? {
            Symmetry::Point(c) => c.alpha,
            Symmetry::Interval(iv) => return Err(format!("interval {iv:?}")),
        };
        ensure((a - ALPHA4).abs() <= 1e-12, || {
            format!("β={beta}, γ={gamma}: {a}")
        })?;
        let prior = beta.min(gamma) / (5.0 * beta.max(gamma));
        ensure(a > prior, || format!("no improvement over {prior}"))?;
        let est = alpha_sample_nd(&f, 100_000, 100 + i as u64, 1).map_err(|e| e.to_string())?;
        ensure((est.alpha_hat - a).abs() <= 2e-3, || {
            format!("oracle {}", est.alpha_hat)
        })?;
        parts.push(format!(
            "β={beta},γ={gamma} prior {prior:.2e} oracle {:+.1e}",
            est.alpha_hat - a
        ));
    }
    Ok(parts.join("; "))
}

fn c10_counterexample() -> Result<String, String> {
    let r = counterexample_ratio().map_err(|e| e.to_string())?;
    ensure(r < 0.2676, || format!("ratio {r}"))?;
    Ok(format!("ratio {r:.8} < 0.2676"))
}

fn c11_perfect_symmetry() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
    let q = a.transpose() * &a + DMatrix::identity(4, 4) * 0.1;
    let b = DVector::from_fn(4, |_, _| rng.random_range(-1.0..1.0));
    let f = ReferenceFunction::quadratic(q, b, 0.7).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-10.0..10.0)).collect();
        let y: Vec<f64> = (0..4).map(|_| rng.random_range(-10.0..10.0)).collect();
        let r = f.bregman(&x, &y).unwrap() / f.bregman(&y, &x).unwrap();
        worst = worst.max((r - 1.0).abs());
    }
    ensure(worst <= 1e-12, || format!("max |ratio − 1| = {worst:e}"))?;
    let pw = alpha_piecewise_quadratic(2.5, 2.5).map_err(|e| e.to_string())?;
    ensure(pw == 1.0, || {
        format!("alpha_piecewise_quadratic(a,a) = {pw}")
    })?;
    Ok(format!("max |ratio − 1| = {worst:.1e}, piecewise = 1"))
}

fn c12_property_suites() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ps = [2.5, 3.0, 4.0, 7.3, 20.0];

    for p in ps {
        for _ in 0..100 {
            let u: f64 = rng.random_range(1e-6..1.0);
            let prod = power_ratio(p, 1.0 / u).unwrap() * power_ratio(p, u).unwrap();
            ensure((prod - 1.0).abs() <= 1e-10, || {
                format!("reciprocal p={p} u={u}: {prod}")
            })?;
        }
        for i in 0..=20_000 {
            let u = -10.0 + i as f64 * 1e-3;
            if (u - 1.0).abs() < 1e-12 {
                continue;
            }
            let den = (p - 1.0) * u.abs().powf(p) - p * u.signum() * u.abs().powf(p - 1.0) + 1.0;
            let den = if u == 0.0 { 1.0 } else { den };
            ensure(den > 0.0, || format!("denominator p={p} u={u}: {den}"))?;
        }
        ensure(quasiconcavity_check(p, 2001), || {
            format!("quasiconcavity p={p}")
        })?;
    }

    for _ in 0..100 {
        let p: f64 = rng.random_range(2.05..50.0);
        let q = p + rng.random_range(0.1..50.0);
        let u: f64 = -rng.random_range(1e-3..1.0 - 1e-3);
        let (fp, fq) = (power_ratio(p, u).unwrap(), power_ratio(q, u).unwrap());
        ensure(fq > fp, || {
            format!("f monotonicity p={p} q={q} u={u}: {fq} ≤ {fp}")
        })?;
    }

    for p in [3.0, 4.0, 8.0] {
        for i in 1..50 {
            let u = i as f64 / 50.0;
            let mut prev = f64::INFINITY;
            for j in 0..=200 {
                let r = -1.0 + j as f64 * 0.01;
                let v = two_norm_ratio(p, u, r).unwrap();
                ensure(v <= prev * (1.0 + 1e-12), || {
                    format!("F_p p={p} u={u} r={r}")
                })?;
                prev = v;
            }
        }
    }

    for p in [2.5, 3.0, 5.5, 9.0, 100.0] {
        let c = alpha_power(p, DEFAULT_TOL).unwrap();
        let u0 = c.u0.ok_or("missing u0")?;
        let back = 1.0 / power_ratio(p, -u0).unwrap();
        ensure((back - c.alpha).abs() <= 1e-12 * c.alpha, || {
            format!("certificate p={p}")
        })?;
        ensure(stationarity(p, u0).unwrap().abs() <= c.residual, || {
            format!("residual p={p}")
        })?;
        let (lo, hi) = alpha_bounds(p).unwrap();
        ensure(lo < c.alpha && c.alpha < hi, || format!("sandwich p={p}"))?;
    }
    Ok("reciprocal, denominator, quasiconcavity, f-monotone, F_p r-monotone, certificates".into())
}

#[test]
fn acceptance_criteria() {
    let mut report = Report { lines: Vec::new() };
    report.record(1, "closed-form agreement", c01_closed_forms());
    report.record(2, "radical values p=8,10", c02_radical_values());
    report.record(3, "conjugacy", c03_conjugacy());
    report.record(4, "monotone sandwiched sweep", c04_sweep());
    report.record(5, "asymptotic trend", c05_asymptotic());
    report.record(6, "exact factorization", c06_factorization());
    report.record(7, "grid oracle vs bisection", c07_grid_oracle());
    report.record(8, "dimension independence", c08_dimension_independence());
    report.record(9, "sum rules", c09_sum_rules());
    report.record(10, "counterexample", c10_counterexample());
    report.record(11, "perfect symmetry", c11_perfect_symmetry());
    report.record(12, "property suites", c12_property_suites());

    let failed: Vec<&String> = report
        .lines
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(l, _)| l)
        .collect();
    println!(
        "{} of {} criteria passed",
        report.lines.len() - failed.len(),
        report.lines.len()
    );
    assert!(
        failed.is_empty(),
        "failed criteria:\n{}",
        failed
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
