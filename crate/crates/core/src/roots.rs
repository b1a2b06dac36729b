//! Bracketed root finding.

use crate::error::{FwmError, Result};

pub const MAX_BISECTION_ITERATIONS: usize = 200;

/// Points used to estimate max|f| over a bracket.
const MAGNITUDE_SAMPLES: usize = 64;

/// Bisection on `[lo, hi]`.
///
/// Stops once `|f(x)| < rel_tol * max|f|`, where the maximum is estimated on
/// an even sample of the bracket, or when the bracket can no longer be split.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(FwmError::NoRoot { lo: a, hi: b });
    }

    let mut scale = fa.abs().max(fb.abs());
    for i in 1..MAGNITUDE_SAMPLES {
        let x = a + (b - a) * i as f64 / MAGNITUDE_SAMPLES as f64;
        scale = scale.max(f(x)?.abs());
    }
    let target = rel_tol * scale;

    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        if fm.abs() < target || mid <= a || mid >= b {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(FwmError::NoConvergence {
        iterations: MAX_BISECTION_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn reversed_bracket() {
        let r = bisect(|x| Ok(x - 0.25), 1.0, 0.0, 1e-12).unwrap();
        assert!((r - 0.25).abs() < 1e-12);
    }

    #[test]
    fn root_at_endpoint() {
        assert_eq!(bisect(Ok, 0.0, 1.0, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn no_sign_change() {
        let err = bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-6).unwrap_err();
        assert!(matches!(err, FwmError::NoRoot { .. }));
    }

    #[test]
    fn propagates_errors() {
        let err = bisect(|_| Err(FwmError::Domain("x".into())), 0.0, 1.0, 1e-6);
        assert!(err.is_err());
    }
}
