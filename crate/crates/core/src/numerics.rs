//! Small deterministic numerical helpers shared across modules.

use crate::{Error, Result};

/// Bisection on a bracketing interval to `rel_tol` relative width.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoRoot(format!(
            "no sign change on [{lo:.6e}, {hi:.6e}]"
        )));
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
        if (hi - lo).abs() <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scans `[lo, hi]` with `n` uniform intervals and bisects the first sign
/// change of `f`. Points where `f` returns `None` break the bracket.
pub fn scan_first_root<F>(mut f: F, lo: f64, hi: f64, n: usize, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Option<f64>,
{
    let step = (hi - lo) / n as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=n {
        let x = lo + step * i as f64;
        match f(x) {
            Some(v) => {
                if let Some((px, pv)) = prev {
                    if v == 0.0 {
                        return Ok(x);
                    }
                    if pv.signum() != v.signum() {
                        return bisect(|t| f(t).unwrap_or(f64::NAN), px, x, rel_tol);
                    }
                }
                prev = Some((x, v));
            }
            None => prev = None,
        }
    }
    Err(Error::NoRoot(format!(
        "no sign change found scanning [{lo:.6e}, {hi:.6e}]"
    )))
}

/// Pearson correlation of two coordinates under a nonnegative weight.
pub fn weighted_correlation(xs: &[f64], ys: &[f64], weight: impl Fn(usize, usize) -> f64) -> f64 {
    let mut wsum = 0.0;
    let (mut mx, mut my) = (0.0, 0.0);
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let w = weight(i, j);
            wsum += w;
            mx += w * x;
            my += w * y;
        }
    }
    mx /= wsum;
    my /= wsum;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let w = weight(i, j);
            let (dx, dy) = (x - mx, y - my);
            sxx += w * dx * dx;
            syy += w * dy * dy;
            sxy += w * dx * dy;
        }
    }
    sxy / (sxx * syy).sqrt()
}
