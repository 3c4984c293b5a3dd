//! Continued-fraction rational approximation with bounded denominator.

/// Best continued-fraction convergent p/q of `x` with q <= qmax.
/// Returns (p, q, |x - p/q|); gcd(p, q) = 1 by construction.
pub fn rational_approx(x: f64, qmax: u64) -> (i64, u64, f64) {
    let qmax = qmax.max(1);
    if !x.is_finite() {
        return (0, 1, f64::INFINITY);
    }
    // convergents h_k / k_k of the simple continued fraction of x
    let (mut h0, mut k0): (i128, i128) = (1, 0);
    let (mut h1, mut k1): (i128, i128) = (x.floor() as i128, 1);
    let mut frac = x - x.floor();

    for _ in 0..64 {
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a >= 9.0e17 {
            break;
        }
        let h2 = a as i128 * h1 + h0;
        let k2 = a as i128 * k1 + k0;
        if k2 as u128 > qmax as u128 || h2.unsigned_abs() > i64::MAX as u128 {
            break;
        }
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
        frac = inv - a;
        // the convergent is already exact to double precision
        if (x - h1 as f64 / k1 as f64).abs() == 0.0 {
            break;
        }
    }
    let p = h1 as i64;
    let q = k1 as u64;
    (p, q, (x - p as f64 / q as f64).abs())
}
