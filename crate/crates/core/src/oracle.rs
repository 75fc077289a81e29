//! Brute-force estimates of α straight from the defining infimum.
//!
//! Every candidate pair is feasible, so each estimate is an upper bound on
//! the true coefficient up to rounding. Nothing here calls into the bisection
//! machinery: ratios are Bregman distances evaluated by the catalog.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::catalog::ReferenceFunction;
use crate::error::{check_exponent, Error, Result};
use crate::symmetry::power_ratio_unchecked;

/// Pairs whose reverse distance falls below this are redrawn.
pub const MIN_DENOMINATOR: f64 = 1e-300;
/// Halvings of the perturbation step in one refinement round.
pub const SHRINK_LEVELS: u32 = 40;
/// Sampled magnitudes are log-uniform over `[10^-DECADES, 10^DECADES]`.
pub const MAGNITUDE_DECADES: f64 = 3.0;

const MAX_SWEEPS_PER_LEVEL: usize = 64;
const MAX_REDRAWS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    pub alpha_hat: f64,
    pub witness_x: Vec<f64>,
    pub witness_y: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub refined: bool,
}

/// `D_f(x,y) / D_f(y,x)` for distinct points.
pub fn ratio(f: &ReferenceFunction, x: &[f64], y: &[f64]) -> Result<f64> {
    if x == y {
        return Err(Error::IdenticalPoints);
    }
    let num = f.bregman(x, y)?;
    let den = f.bregman(y, x)?;
    if den.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || !den.is_finite()
        || !num.is_finite()
    {
        return Err(Error::DegenerateRatio { denominator: den });
    }
    Ok(num / den)
}

fn oriented_ratio(f: &ReferenceFunction, x: &[f64], y: &[f64]) -> Option<(f64, bool)> {
    let fwd = f.bregman_unchecked(x, y);
    let back = f.bregman_unchecked(y, x);
    if !(fwd >= MIN_DENOMINATOR && back >= MIN_DENOMINATOR) || !fwd.is_finite() || !back.is_finite()
    {
        return None;
    }
    let r = fwd / back;
    Some(if r <= 1.0 {
        (r, false)
    } else {
        (1.0 / r, true)
    })
}

/// Grid search of `min{r(u), 1/r(u)}` over `u ∈ [−1, 1]` for `|·|^p`, where
/// `r(u) = D(u,1)/D(1,u)`, followed by golden-section refinement around the
/// best grid cell. Valid for `p > 2`, where the ratio is quasiconcave.
pub fn alpha_grid_1d(p: f64, resolution: usize) -> Result<OracleEstimate> {
    check_exponent(p, 2.0)?;
    if resolution < 10 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: format!("need at least 10 grid points, got {resolution}"),
        });
    }
    let f = ReferenceFunction::power_abs(p, 1.0)?;
    let objective = |u: f64| -> f64 {
        if u == 1.0 {
            return 1.0;
        }
        let r = f.bregman_unchecked(&[u], &[1.0]) / f.bregman_unchecked(&[1.0], &[u]);
        r.min(1.0 / r)
    };

    let step = 2.0 / (resolution - 1) as f64;
    let grid = |i: usize| {
        if i + 1 == resolution {
            1.0
        } else {
            -1.0 + i as f64 * step
        }
    };
    let (best_i, _) =
        (0..resolution)
            .map(|i| (i, objective(grid(i))))
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );

    let lo = grid(best_i.saturating_sub(1));
    let hi = grid((best_i + 1).min(resolution - 1));
    let u = golden_section_min(objective, lo, hi, 1e-13);
    let candidate = if objective(u) <= objective(grid(best_i)) {
        u
    } else {
        grid(best_i)
    };

    // orient the witness so that alpha_hat is exactly D(x,y)/D(y,x)
    let r = ratio(&f, &[candidate], &[1.0])?;
    let (x, y) = if r <= 1.0 {
        (vec![candidate], vec![1.0])
    } else {
        (vec![1.0], vec![candidate])
    };
    Ok(OracleEstimate {
        alpha_hat: ratio(&f, &x, &y)?,
        witness_x: x,
        witness_y: y,
        samples: resolution,
        seed: 0,
        refined: true,
    })
}

/// Golden-section search for the minimizer of a unimodal function on `[a, b]`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    0.5 * (a + b)
}

fn draw_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let exponent = rng.random_range(-MAGNITUDE_DECADES..=MAGNITUDE_DECADES);
    let scale = 10f64.powf(exponent) / norm.max(f64::MIN_POSITIVE);
    v.iter_mut().for_each(|x| *x *= scale);
    v
}

/// Sample `i` uses stream `i` of a ChaCha8 generator keyed by `seed`, so the
/// draws for a prefix of indices never depend on the total count or on how
/// the index range is split between threads.
fn sample_pair(f: &ReferenceFunction, seed: u64, index: u64) -> Option<(f64, Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let dim = f.dim();
    for _ in 0..MAX_REDRAWS {
        let x = draw_point(&mut rng, dim);
        let y = draw_point(&mut rng, dim);
        if x == y {
            continue;
        }
        if let Some((r, swapped)) = oriented_ratio(f, &x, &y) {
            return Some(if swapped { (r, y, x) } else { (r, x, y) });
        }
    }
    None
}

/// Random-search estimate of α(f) with optional local refinement.
///
/// Draws `samples` pairs with Gaussian directions and log-uniform magnitudes,
/// keeps the smallest ratio (either orientation), then runs `refine_steps`
/// rounds of coordinate perturbation descent from the best pair. The result
/// depends only on `(f, samples, seed, refine_steps)`. Without refinement the
/// estimate is nonincreasing in `samples` for a fixed seed.
pub fn alpha_sample_nd(
    f: &ReferenceFunction,
    samples: usize,
    seed: u64,
    refine_steps: usize,
) -> Result<OracleEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "need at least one sample".into(),
        });
    }
    let best = (0..samples as u64)
        .into_par_iter()
        .filter_map(|i| sample_pair(f, seed, i).map(|(r, x, y)| (r, i, x, y)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let Some((_, _, mut x, mut y)) = best else {
        return Err(Error::DegenerateRatio { denominator: 0.0 });
    };

    for _ in 0..refine_steps {
        refine(f, &mut x, &mut y);
    }
    let alpha_hat = ratio(f, &x, &y)?;
    Ok(OracleEstimate {
        alpha_hat,
        witness_x: x,
        witness_y: y,
        samples,
        seed,
        refined: refine_steps > 0,
    })
}

/// One round of greedy coordinate descent on `D(x,y)/D(y,x)`. Steps are
/// relative to the size of the pair and halve over [`SHRINK_LEVELS`] levels.
fn refine(f: &ReferenceFunction, x: &mut Vec<f64>, y: &mut Vec<f64>) {
    let eval = |x: &[f64], y: &[f64]| -> f64 {
        if x == y {
            return f64::INFINITY;
        }
        let num = f.bregman_unchecked(x, y);
        let den = f.bregman_unchecked(y, x);
        if den >= MIN_DENOMINATOR && num.is_finite() && den.is_finite() {
            num / den
        } else {
            f64::INFINITY
        }
    };
    let dim = x.len();
    let mut best = eval(x, y);
    for level in 0..SHRINK_LEVELS {
        let rel = 0.5f64.powi(level as i32);
        for _ in 0..MAX_SWEEPS_PER_LEVEL {
            let scale = x.iter().chain(y.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
            let step = rel * scale;
            let mut improved = false;
            for k in 0..2 * dim {
                for dir in [1.0, -1.0] {
                    let (target, j) = if k < dim {
                        (&mut *x, k)
                    } else {
                        (&mut *y, k - dim)
                    };
                    let old = target[j];
                    target[j] = old + dir * step;
                    let r = eval(x, y);
                    if r < best {
                        best = r;
                        improved = true;
                    } else {
                        let (target, j) = if k < dim {
                            (&mut *x, k)
                        } else {
                            (&mut *y, k - dim)
                        };
                        target[j] = old;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
}

/// Whether the ratio profile of `|·|^p` sampled on `grid_size` points of
/// `[−1, 1]` rises to a single peak and falls afterwards, with the peak at a
/// negative `u`. Comparisons allow a slack of `1e-12` times the peak value.
pub fn quasiconcavity_check(p: f64, grid_size: usize) -> bool {
    if p.is_nan() || p <= 2.0 || !p.is_finite() || grid_size < 3 {
        return false;
    }
    let step = 2.0 / (grid_size - 1) as f64;
    let u = |i: usize| {
        if i + 1 == grid_size {
            1.0
        } else {
            -1.0 + i as f64 * step
        }
    };
    let values: Vec<f64> = (0..grid_size)
        .map(|i| power_ratio_unchecked(p, u(i)))
        .collect();
    let (peak, peak_value) =
        values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| {
                if *v > acc.1 {
                    (i, *v)
                } else {
                    acc
                }
            });
    let slack = 1e-12 * peak_value.abs().max(1.0);
    let rising = values[..=peak].windows(2).all(|w| w[1] >= w[0] - slack);
    let falling = values[peak..].windows(2).all(|w| w[1] <= w[0] + slack);
    rising && falling && u(peak) < 0.0
}
