//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};

/// A sign-changing bracket with cached endpoint values.
#[derive(Debug, Clone, Copy)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<Self> {
        let (f_lo, f_hi) = (f(lo), f(hi));
        Self::from_values(lo, hi, f_lo, f_hi)
    }

    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo < hi) || !f_lo.is_finite() || !f_hi.is_finite() || f_lo * f_hi > 0.0 {
            return Err(Error::InvalidBracket { lo, hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }
}

/// Brent's method.  Returns a point inside the initial bracket with
/// bracket width <= tol (plus machine precision at the root).
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: RootBracket, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut mflag = true;

    for _ in 0..200 {
        let s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let cond_range = {
            let lo = (3.0 * a + b) / 4.0;
            let (lo, hi) = if lo < b { (lo, b) } else { (b, lo) };
            s <= lo || s >= hi
        };
        let eps = tol.max(f64::EPSILON * b.abs());
        let s = if cond_range
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= d.abs() / 2.0)
            || (mflag && (b - c).abs() < eps)
            || (!mflag && d.abs() < eps)
        {
            mflag = true;
            0.5 * (a + b)
        } else {
            mflag = false;
            s
        };
        let fs = f(s);
        d = c - b;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
        if fb == 0.0 || (a - b).abs() <= tol.max(f64::EPSILON * b.abs().max(1.0)) {
            return Ok(b);
        }
    }
    Ok(b)
}

/// Scans `f` over `n` uniform cells of [lo, hi] and returns the first
/// sign-changing bracket, if any.
pub fn scan_bracket<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize) -> Option<RootBracket> {
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = lo + (hi - lo) * i as f64 / n as f64;
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && f0 * f1 <= 0.0 && (f0 != 0.0 || f1 != 0.0) {
            return RootBracket::from_values(x0, x1, f0, f1).ok();
        }
        x0 = x1;
        f0 = f1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sqrt_two() {
        let b = RootBracket::new(|x| x * x - 2.0, 1.0, 2.0).unwrap();
        let r = find_root(|x| x * x - 2.0, b, 1e-15).unwrap();
        assert_abs_diff_eq!(r, 2.0_f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn rejects_unbracketed_interval() {
        assert!(RootBracket::new(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn root_stays_inside_bracket() {
        let f = |x: f64| (x - 0.3).tan();
        let b = RootBracket::new(f, 0.0, 1.0).unwrap();
        let r = find_root(f, b, 1e-13).unwrap();
        assert!((0.0..=1.0).contains(&r));
        assert_abs_diff_eq!(r, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn handles_flat_sides() {
        // steep on one side, flat on the other
        let f = |x: f64| x.powi(9) - 0.5;
        let b = RootBracket::new(f, 0.0, 1.0).unwrap();
        let r = find_root(f, b, 1e-15).unwrap();
        assert_abs_diff_eq!(r, 0.5_f64.powf(1.0 / 9.0), epsilon = 1e-12);
    }
}
