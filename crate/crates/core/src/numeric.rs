//! Small numeric helpers shared by the oracles: Richardson tables and bisection.

use crate::error::{Error, Result};

/// Richardson extrapolation of an estimator whose error is a series in h².
///
/// `est(h)` is sampled at `h0, h0/2, ...` for `levels` rows. Returns the
/// extrapolated value and the last change in the diagonal as an error estimate.
pub fn richardson(est: impl Fn(f64) -> f64, h0: f64, levels: usize) -> (f64, f64) {
    let levels = levels.max(2);
    let mut prev: Vec<f64> = Vec::with_capacity(levels);
    let mut best = est(h0);
    let mut err = f64::INFINITY;
    prev.push(best);
    let mut h = h0;
    for row in 1..levels {
        h *= 0.5;
        let mut cur = Vec::with_capacity(row + 1);
        cur.push(est(h));
        let mut factor = 1.0;
        for k in 1..=row {
            factor *= 4.0;
            let v = cur[k - 1] + (cur[k - 1] - prev[k - 1]) / (factor - 1.0);
            cur.push(v);
        }
        let diag = cur[row];
        let e = (diag - best).abs();
        // Stop once roundoff starts to dominate the table.
        if e > err && row > 2 {
            break;
        }
        err = e;
        best = diag;
        prev = cur;
    }
    (best, err)
}

/// Root of `f` on `[lo, hi]` by bisection to relative width `rtol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rtol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::Numeric {
            message: format!("no sign change on [{lo}, {hi}]"),
            achieved: f64::INFINITY,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= rtol * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_derivative_of_exp() {
        let (d, _) = richardson(|h| ((1.0 + h).exp() - (1.0 - h).exp()) / (2.0 * h), 0.5, 8);
        assert!((d - 1f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-12).is_err());
    }
}
