//! Command-line front end for the `bregsym` binary.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or parse error,
//! 3 I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::catalog::{parse_descriptor, ReferenceFunction};
use crate::error::{Error, Result};
use crate::oracle::{alpha_sample_nd, ratio};
use crate::palindromic::{closed_form_alpha, factor_check};
use crate::symmetry::{alpha_of, alpha_power, Symmetry, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Tolerance for closed forms against bisection in `verify`.
pub const VERIFY_TOL: f64 = 1e-10;
/// Threshold the counterexample ratio must fall under.
pub const COUNTEREXAMPLE_BOUND: f64 = 0.2676;

#[derive(Debug, Parser)]
#[command(
    name = "bregsym",
    version,
    about = "Symmetry coefficients of Legendre functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute α for a function descriptor, e.g. "abs_pow(p=4)".
    Alpha {
        descriptor: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Write a CSV of α(|·|^p) over a grid of exponents.
    Sweep {
        #[arg(long, default_value_t = 2.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1000.0)]
        p_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check closed forms, factorizations, conjugacy and the sum counterexample.
    Verify,
    /// Estimate α by random search over point pairs.
    Oracle {
        descriptor: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rounds of local refinement from the best sampled pair.
        #[arg(long, default_value_t = 1)]
        refine: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

/// One line of a sweep file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub alpha: f64,
}

/// Exponent grid with exact endpoints.
pub fn sweep_grid(p_min: f64, p_max: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(p_min > 1.0 && p_max > p_min && p_max.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p_min/p_max",
            reason: format!("need 1 < p_min < p_max, got [{p_min}, {p_max}]"),
        });
    }
    if points < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: format!("need at least 2 points, got {points}"),
        });
    }
    let last = (points - 1) as f64;
    let (lmin, lmax) = (p_min.ln(), p_max.ln());
    Ok((0..points)
        .map(|i| match i {
            0 => p_min,
            _ if i + 1 == points => p_max,
            _ => {
                let t = i as f64 / last;
                match spacing {
                    Spacing::Log => (lmin + t * (lmax - lmin)).exp(),
                    Spacing::Linear => p_min + t * (p_max - p_min),
                }
            }
        })
        .collect())
}

/// α(|·|^p) at every grid exponent, computed in parallel, ordered by p.
pub fn sweep(
    p_min: f64,
    p_max: f64,
    points: usize,
    spacing: Spacing,
    tol: f64,
) -> Result<Vec<SweepRow>> {
    sweep_grid(p_min, p_max, points, spacing)?
        .into_par_iter()
        .map(|p| alpha_power(p, tol).map(|c| SweepRow { p, alpha: c.alpha }))
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> io::Result<()> {
    writeln!(w, "p,alpha")?;
    for r in rows {
        writeln!(w, "{},{}", r.p, r.alpha)?;
    }
    w.flush()
}

pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    if lines.next() != Some("p,alpha") {
        return Err(Error::Parse {
            pos: 0,
            msg: "missing `p,alpha` header".into(),
        });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || Error::Parse {
                pos: i + 1,
                msg: format!("malformed row `{line}`"),
            };
            let (p, a) = line.split_once(',').ok_or_else(bad)?;
            Ok(SweepRow {
                p: p.parse().map_err(|_| bad())?,
                alpha: a.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// Decimal rendering with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..16).contains(&mag) {
        format!("{:.*}", (16 - mag) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

/// `¾|·|^{4/3} + h_{1,b} + ¼|·|⁴` with `b = 10⁻⁷`, the sum whose coefficient
/// falls below both extremal terms.
pub fn counterexample() -> ReferenceFunction {
    parse_descriptor("sum(0.75*abs_pow(p=4/3), pw_quad(a=1,b=1e-7), 0.25*abs_pow(p=4))")
        .expect("fixed descriptor parses")
}

/// `D(x,y)/D(y,x)` for [`counterexample`] at `x = 10⁻³`, `y = −5·10⁻²`.
pub fn counterexample_ratio() -> Result<f64> {
    ratio(&counterexample(), &[1e-3], &[-5e-2])
}

/// One line of the `verify` report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Fixed exponents in (1,2) for the conjugacy spot checks.
pub const CONJUGACY_SPOT_CHECKS: [f64; 4] = [1.25, 4.0 / 3.0, 1.5, 1.8];

pub fn verify_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in [2u32, 3, 4, 6, 8, 10] {
        let name = format!("closed-form p={p}");
        let check = closed_form_alpha(p).and_then(|exact| {
            let bis = alpha_power(p as f64, DEFAULT_TOL)?.alpha;
            Ok((exact, bis))
        });
        out.push(match check {
            Ok((exact, bis)) => CheckResult {
                name,
                passed: (exact - bis).abs() <= VERIFY_TOL,
                detail: format!(
                    "closed form {} bisection {} diff {:.3e}",
                    format_sig17(exact),
                    format_sig17(bis),
                    (exact - bis).abs()
                ),
            },
            Err(e) => CheckResult {
                name,
                passed: false,
                detail: e.to_string(),
            },
        });
    }
    for p in (4u32..=20).step_by(2) {
        let name = format!("factorization p={p}");
        out.push(match factor_check(p) {
            Ok(ok) => CheckResult {
                name,
                passed: ok,
                detail: if ok {
                    "exact".into()
                } else {
                    "mismatch".into()
                },
            },
            Err(e) => CheckResult {
                name,
                passed: false,
                detail: e.to_string(),
            },
        });
    }
    for p in CONJUGACY_SPOT_CHECKS {
        let q = p / (p - 1.0);
        let name = format!("conjugacy p={p} q={q}");
        let check = alpha_power(p, DEFAULT_TOL)
            .and_then(|a| Ok((a.alpha, alpha_power(q, DEFAULT_TOL)?.alpha)));
        out.push(match check {
            Ok((a, b)) => CheckResult {
                name,
                passed: (a - b).abs() <= 1e-12,
                detail: format!("{} vs {}", format_sig17(a), format_sig17(b)),
            },
            Err(e) => CheckResult {
                name,
                passed: false,
                detail: e.to_string(),
            },
        });
    }
    let name = "sum counterexample".to_string();
    out.push(match counterexample_ratio() {
        Ok(r) => CheckResult {
            name,
            passed: r < COUNTEREXAMPLE_BOUND,
            detail: format!("ratio {} < {COUNTEREXAMPLE_BOUND}", format_sig17(r)),
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.to_string(),
        },
    });
    out
}

/// Parses `args` (program name first) and runs the chosen command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Alpha { descriptor, tol } => cmd_alpha(&descriptor, tol, out),
        Command::Sweep {
            p_min,
            p_max,
            points,
            spacing,
            tol,
            out: path,
        } => cmd_sweep(p_min, p_max, points, spacing, tol, &path, out),
        Command::Verify => cmd_verify(out),
        Command::Oracle {
            descriptor,
            samples,
            seed,
            refine,
        } => cmd_oracle(&descriptor, samples, seed, refine, out),
    };
    match result {
        Ok(code) => code,
        Err(CmdError::Usage(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(CmdError::Io(path, e)) => {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            EXIT_IO
        }
    }
}

enum CmdError {
    Usage(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError::Usage(e)
    }
}

type CmdResult = std::result::Result<i32, CmdError>;

fn cmd_alpha(descriptor: &str, tol: f64, out: &mut dyn Write) -> CmdResult {
    let f = parse_descriptor(descriptor)?;
    let report = match alpha_of(&f, tol)? {
        Symmetry::Point(c) => {
            let mut s = format!("alpha: {}\nmethod: {}\n", format_sig17(c.alpha), c.method);
            if let Some(u0) = c.u0 {
                s += &format!("u0: {}\n", format_sig17(u0));
                s += &format!("iterations: {}\nresidual: {:e}\n", c.iterations, c.residual);
            }
            s
        }
        Symmetry::Interval(i) => format!(
            "interval: [{}, {}]\n",
            format_sig17(i.lower),
            format_sig17(i.upper)
        ),
    };
    let _ = out.write_all(report.as_bytes());
    Ok(EXIT_OK)
}

fn cmd_sweep(
    p_min: f64,
    p_max: f64,
    points: usize,
    spacing: Spacing,
    tol: f64,
    path: &Path,
    out: &mut dyn Write,
) -> CmdResult {
    let rows = sweep(p_min, p_max, points, spacing, tol)?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).expect("writing to memory");
    fs::write(path, buf).map_err(|e| CmdError::Io(path.to_path_buf(), e))?;
    let _ = writeln!(out, "wrote {} rows to {}", rows.len(), path.display());
    Ok(EXIT_OK)
}

fn cmd_verify(out: &mut dyn Write) -> CmdResult {
    let checks = verify_checks();
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        let _ = writeln!(out, "all {} checks passed", checks.len());
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "failed: {}", failed.join(", "));
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn cmd_oracle(
    descriptor: &str,
    samples: usize,
    seed: u64,
    refine: usize,
    out: &mut dyn Write,
) -> CmdResult {
    let f = parse_descriptor(descriptor)?;
    let est = alpha_sample_nd(&f, samples, seed, refine)?;
    let vec = |v: &[f64]| {
        let parts: Vec<String> = v.iter().map(|x| format_sig17(*x)).collect();
        format!("[{}]", parts.join(", "))
    };
    let mut s = format!(
        "alpha_hat: {}\nwitness_x: {}\nwitness_y: {}\nsamples: {samples}\nseed: {seed}\n",
        format_sig17(est.alpha_hat),
        vec(&est.witness_x),
        vec(&est.witness_y)
    );
    match alpha_of(&f, DEFAULT_TOL) {
        Ok(Symmetry::Point(c)) => {
            s += &format!(
                "alpha: {}\ngap: {:e}\n",
                format_sig17(c.alpha),
                est.alpha_hat - c.alpha
            );
        }
        Ok(Symmetry::Interval(i)) => {
            s += &format!(
                "interval: [{}, {}]\n",
                format_sig17(i.lower),
                format_sig17(i.upper)
            );
        }
        Err(_) => {}
    }
    let _ = out.write_all(s.as_bytes());
    Ok(EXIT_OK)
}
