use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` for a sign change of `f`.
///
/// Returns `Ok(None)` if `f(lo)` and `f(hi)` share a sign, otherwise the
/// midpoint of the final bracket once its width is below `tol`.
pub fn bisect_sign_change<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi && tol > 0.0) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    if f_hi == 0.0 {
        return Ok(Some(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Ok(None);
    }
    let lo_positive = f_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Some(mid));
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
