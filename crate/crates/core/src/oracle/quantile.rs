use crate::error::{Error, Result};

const MAX_DOUBLINGS: usize = 200;
const MAX_ITERATIONS: usize = 400;
pub const QUANTILE_TOLERANCE: f64 = 1e-12;

/// Inverts a continuous nondecreasing distribution function supported on
/// `[0, ∞)`.
///
/// The bracket starts at `[0, 1]` and the upper end doubles until it covers
/// `p`. Refinement alternates false-position and bisection steps, stopping
/// when `|F(t) - p| < 1e-12` or the bracket collapses to adjacent doubles.
pub fn quantile<F>(cdf: F, p: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quantile level must be in (0, 1), got {p}"
        )));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut f_lo = cdf(lo) - p;
    let mut f_hi = cdf(hi) - p;
    let mut doublings = 0;
    while f_hi < 0.0 {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::QuantileBracket {
                p,
                upper: hi,
                value: f_hi + p,
            });
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = cdf(hi) - p;
        doublings += 1;
    }
    if f_lo.abs() < QUANTILE_TOLERANCE {
        return Ok(lo);
    }

    for iter in 0..MAX_ITERATIONS {
        if f_hi.abs() < QUANTILE_TOLERANCE {
            return Ok(hi);
        }
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let mid = 0.5 * (lo + hi);
        let t = if iter % 2 == 0 && secant > lo && secant < hi {
            secant
        } else {
            mid
        };
        if t <= lo || t >= hi {
            break;
        }
        let f_t = cdf(t) - p;
        if f_t.abs() < QUANTILE_TOLERANCE {
            return Ok(t);
        }
        if f_t < 0.0 {
            lo = t;
            f_lo = f_t;
        } else {
            hi = t;
            f_hi = f_t;
        }
    }
    Ok(if f_lo.abs() < f_hi.abs() { lo } else { hi })
}
