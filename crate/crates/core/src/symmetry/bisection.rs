/// Final state of a bracketing bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    /// Endpoint where the function is positive (or zero).
    pub lo: f64,
    /// Endpoint where the function is negative (or zero).
    pub hi: f64,
    pub iterations: u32,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).abs()
    }
}

/// Bisects `f` on a bracket with `f(lo) > 0 > f(hi)`.
///
/// Stops once the bracket is no wider than `tol`, after `max_iter` halvings,
/// when the midpoint is no longer representable strictly inside the bracket,
/// or on an exact zero (the bracket then collapses onto it).
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: u32) -> Bracket
where
    F: FnMut(f64) -> f64,
{
    let mut iterations = 0;
    while (hi - lo).abs() > tol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        iterations += 1;
        let v = f(mid);
        if v > 0.0 {
            lo = mid;
        } else if v < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    Bracket { lo, hi, iterations }
}
