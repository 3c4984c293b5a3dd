//! Closed-form geometry: sphere profile functions y(x), the sphere
//! immersions, the conformal factor of the sphere metric, sphere area and
//! enclosed volume, Clifford-torus radii and torus area/volume.
//!
//! The area and volume formulas have two printed branches depending on the
//! sign of kappa - 4 tau^2.  Both are instances of one analytic function
//!
//! ```text
//! G(c, z) = arctan(sqrt(c) z)/sqrt(c)   (c > 0)
//!         = arctanh(sqrt(-c) z)/sqrt(-c) (c < 0)
//!         = z - c z^3/3 + c^2 z^5/5 - ...
//! ```
//!
//! which we evaluate by its series near c = 0, where the printed branches
//! lose all their digits to cancellation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{AmbientPoint, SpaceKind, SpaceParams};

/// Threshold on |kappa - 4 tau^2| below which the removable-singularity
/// series is used instead of the printed arctan/arctanh branches.
const BRANCH_EPS: f64 = 1e-6;

/// G(c, z) as above; `c z^2` must be > -1 for the arctanh branch.
pub fn arc_ratio(c: f64, z: f64) -> f64 {
    if c.abs() < BRANCH_EPS {
        let z2 = z * z;
        // |c z^5/5| etc; four terms give ~1e-26 relative error at |c| = 1e-6
        return z * (1.0 - c * z2 / 3.0 + c * c * z2 * z2 / 5.0 - c * c * c * z2 * z2 * z2 / 7.0);
    }
    if c > 0.0 {
        let r = c.sqrt();
        (r * z).atan() / r
    } else {
        let r = (-c).sqrt();
        (r * z).atanh() / r
    }
}

fn require_sphere(h: f64, sp: &SpaceParams) -> Result<f64> {
    let d = 4.0 * h * h + sp.kappa;
    if d <= 0.0 {
        return Err(Error::NoSphere);
    }
    Ok(d)
}

/// Half-domain of the sphere profile: arctan(sqrt(kappa)/2H) in the Berger
/// sphere, arctanh(sqrt(-kappa)/2H) in Sl(2,R).
pub fn sphere_half_domain(h: f64, sp: &SpaceParams) -> Result<f64> {
    let _ = require_sphere(h, sp)?;
    match sp.kind {
        SpaceKind::BergerSphere => {
            if h <= 0.0 {
                return Err(Error::InvalidParams("Berger sphere profile needs H > 0".into()));
            }
            Ok((sp.kappa.sqrt() / (2.0 * h)).atan())
        }
        SpaceKind::Sl2R => Ok(((-sp.kappa).sqrt() / (2.0 * h)).atanh()),
    }
}

/// lambda(x) (Berger) or rho(x) (Sl(2,R)): the auxiliary monotone branch
/// variable, equal to 1 at x = 0 and 0 at the axis end of the domain.
pub fn aux_branch(x: f64, h: f64, sp: &SpaceParams) -> Result<f64> {
    let b = sp.bundle_ratio();
    match sp.kind {
        SpaceKind::BergerSphere => {
            let t2 = x.tan().powi(2);
            let num = 1.0 - (4.0 * h * h / sp.kappa) * t2;
            if num < -1e-12 {
                return Err(Error::OutsideBand { x });
            }
            Ok((num.max(0.0) / (1.0 + b * t2)).sqrt())
        }
        SpaceKind::Sl2R => {
            let t2 = x.tanh().powi(2);
            let num = 1.0 + (4.0 * h * h / sp.kappa) * t2;
            if num < -1e-12 {
                return Err(Error::OutsideBand { x });
            }
            Ok((num.max(0.0) / (1.0 - b * t2)).sqrt())
        }
    }
}

/// The sphere profile y(x).
///
/// Berger: domain [0, a] with y(a) = 0 and y <= 0, minimum at x = 0.
/// Sl(2,R): domain [x1, 0] with x1 = -a, y(x1) = 0, strictly decreasing to
/// y(0) < 0.  In both spaces the sphere is embedded iff y(0) > -pi.
pub fn sphere_profile_y(x: f64, h: f64, sp: &SpaceParams) -> Result<f64> {
    let d = require_sphere(h, sp)?;
    let a = sphere_half_domain(h, sp)?;
    match sp.kind {
        SpaceKind::BergerSphere => {
            if !(0.0..=a + 1e-12).contains(&x) {
                return Err(Error::OutsideBand { x });
            }
        }
        SpaceKind::Sl2R => {
            if !(-a - 1e-12..=1e-12).contains(&x) {
                return Err(Error::OutsideBand { x });
            }
        }
    }
    Ok(profile_y_even(x.abs(), h, sp, d))
}

/// y at |x|; both branch variables are even in x, and the immersion needs
/// the even extension.
fn profile_y_even(xa: f64, h: f64, sp: &SpaceParams, d: f64) -> f64 {
    let lam = aux_branch(xa, h, sp).unwrap_or(0.0);
    let c = (4.0 * sp.tau * sp.tau - sp.kappa) / d;
    let lead = (sp.tau / h * lam).atan();
    match sp.kind {
        SpaceKind::BergerSphere => -lead + (h / sp.tau) * c * arc_ratio(c, lam),
        SpaceKind::Sl2R => lead - (h / sp.tau) * c * arc_ratio(c, lam),
    }
}

/// dy/dx of the profile, as printed; used by tests as the quadrature oracle.
pub fn sphere_profile_y_prime(x: f64, h: f64, sp: &SpaceParams) -> Result<f64> {
    require_sphere(h, sp)?;
    let b = sp.bundle_ratio();
    match sp.kind {
        SpaceKind::BergerSphere => {
            let t2 = x.tan().powi(2);
            let num = 1.0 - (4.0 * h * h / sp.kappa) * t2;
            if num <= 0.0 {
                return Err(Error::OutsideBand { x });
            }
            Ok(h / sp.tau * x.tan() * (1.0 + b * t2).sqrt() / num.sqrt())
        }
        SpaceKind::Sl2R => {
            let t2 = x.tanh().powi(2);
            let num = 1.0 + (4.0 * h * h / sp.kappa) * t2;
            if num <= 0.0 {
                return Err(Error::OutsideBand { x });
            }
            Ok(h * x.tanh() * (1.0 - b * t2).sqrt() / (sp.tau * num.sqrt()))
        }
    }
}

/// Pole angle y(0); the sphere is embedded iff this exceeds -pi.
pub fn sphere_y0(h: f64, sp: &SpaceParams) -> Result<f64> {
    let d = require_sphere(h, sp)?;
    if sp.is_berger() && h == 0.0 {
        // minimal sphere limit
        return Ok(-std::f64::consts::FRAC_PI_2);
    }
    if sp.is_berger() {
        sphere_half_domain(h, sp)?; // validates H > 0
    }
    Ok(profile_y_even(0.0, h, sp, d))
}

/// Closed-form data of the rotational CMC sphere.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SphereProfile {
    pub h: f64,
    /// half-domain a
    pub a: f64,
    /// pole angle y(0) (negative)
    pub y0: f64,
    pub embedded: bool,
}

pub fn sphere_profile(h: f64, sp: &SpaceParams) -> Result<SphereProfile> {
    let a = sphere_half_domain(h, sp)?;
    let y0 = sphere_y0(h, sp)?;
    Ok(SphereProfile { h, a, y0, embedded: y0 > -std::f64::consts::PI })
}

/// The sphere immersion Phi(x, t) on ]-a, a[ x ]-pi, pi[.
pub fn sphere_immersion(x: f64, t: f64, h: f64, sp: &SpaceParams) -> Result<AmbientPoint> {
    let d = require_sphere(h, sp)?;
    let a = sphere_half_domain(h, sp)?;
    if x.abs() >= a || t.abs() > std::f64::consts::PI {
        return Err(Error::OutsideBand { x });
    }
    // u runs from 0 (pole, on the axis) to a (equator); the two half-spheres
    // carry opposite signs of y.
    let (u, ysign) = if x < 0.0 { (x + a, 1.0) } else { (a - x, -1.0) };
    let y = ysign * profile_y_even(u, h, sp, d);
    let (radial, fiber) = match sp.kind {
        SpaceKind::BergerSphere => (u.cos(), u.sin()),
        SpaceKind::Sl2R => (u.cosh(), u.sinh()),
    };
    Ok(AmbientPoint::new(
        radial * Complex64::new(y.cos(), y.sin()),
        fiber * Complex64::new(t.cos(), t.sin()),
    ))
}

/// Conformal factor e^{2u(x)} of the sphere metric in its global conformal
/// parametrisation.
pub fn conformal_factor(x: f64, h: f64, sp: &SpaceParams) -> Result<f64> {
    require_sphere(h, sp)?;
    let a4 = 4.0 * (h * h + sp.tau * sp.tau);
    let ch2 = x.cosh().powi(2);
    let den = a4 * ch2 + (sp.kappa - 4.0 * sp.tau * sp.tau);
    Ok(4.0 * a4 * ch2 / (den * den))
}

/// Area of the CMC sphere, uniform in both spaces.
pub fn sphere_area(h: f64, sp: &SpaceParams) -> Result<f64> {
    let d = require_sphere(h, sp)?;
    let a4 = 4.0 * (h * h + sp.tau * sp.tau);
    let bb = sp.kappa - 4.0 * sp.tau * sp.tau;
    Ok(8.0 * std::f64::consts::PI / d * (1.0 + a4 / d * arc_ratio(-bb / d, 1.0)))
}

/// Volume of the rotation-symmetric side Omega_H enclosed by the Berger CMC
/// sphere (not necessarily the smaller side).  H = 0 gives exactly half the
/// total volume 32 pi^2 tau / kappa^2.
pub fn sphere_volume(h: f64, sp: &SpaceParams) -> Result<f64> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    let d = require_sphere(h, sp)?;
    let k2 = sp.kappa * sp.kappa;
    if h == 0.0 {
        return Ok(16.0 * std::f64::consts::PI * std::f64::consts::PI * sp.tau / k2);
    }
    let bb = sp.kappa - 4.0 * sp.tau * sp.tau;
    let w = bb * (2.0 * h * h + sp.kappa) - 2.0 * sp.tau * sp.tau * d;
    let val = 2.0 * (sp.tau / h).atan() - sp.kappa * h / (sp.tau * d)
        + (2.0 * h / sp.tau) * (w / (d * d)) * arc_ratio(-bb / d, 1.0);
    Ok(16.0 * std::f64::consts::PI * sp.tau / k2 * val)
}

/// Total volume of the Berger sphere.
pub fn total_volume(sp: &SpaceParams) -> Result<f64> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    Ok(32.0 * std::f64::consts::PI * std::f64::consts::PI * sp.tau / (sp.kappa * sp.kappa))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadiusSign {
    Plus,
    Minus,
}

/// Clifford-torus radius r = sqrt(1/2 +/- H / sqrt(4H^2 + kappa)).
pub fn clifford_radius(h: f64, sign: RadiusSign, sp: &SpaceParams) -> Result<f64> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    if h < 0.0 {
        return Err(Error::InvalidParams("H must be nonnegative".into()));
    }
    let d = (4.0 * h * h + sp.kappa).sqrt();
    let s = match sign {
        RadiusSign::Plus => 1.0,
        RadiusSign::Minus => -1.0,
    };
    Ok((0.5 + s * h / d).sqrt())
}

/// Area and smallest enclosed volume of the CMC Clifford torus T_H.
pub fn torus_area_volume(h: f64, sp: &SpaceParams) -> Result<(f64, f64)> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    let d = require_sphere(h, sp)?;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let area = 4.0 * sp.tau / sp.kappa * 4.0 * pi2 / d.sqrt();
    let volume = 16.0 * pi2 * sp.tau / (sp.kappa * sp.kappa) * (1.0 - 2.0 * h / d.sqrt());
    Ok((area, volume))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_endpoint_singular, QuadratureSpec};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn berger(tau: f64) -> SpaceParams {
        SpaceParams::berger(4.0, tau).unwrap()
    }

    #[test]
    fn profile_endpoint_values() {
        let sp = berger(0.4);
        let h = 0.5;
        let a = sphere_half_domain(h, &sp).unwrap();
        assert_abs_diff_eq!(sphere_profile_y(a, h, &sp).unwrap(), 0.0, epsilon = 1e-12);
        assert!(sphere_profile_y(0.0, h, &sp).unwrap() < 0.0);

        let ss = SpaceParams::sl2r(-4.0, 1.0).unwrap();
        let h = 1.2;
        let a = sphere_half_domain(h, &ss).unwrap();
        assert_abs_diff_eq!(sphere_profile_y(-a, h, &ss).unwrap(), 0.0, epsilon = 1e-12);
        assert!(sphere_profile_y(0.0, h, &ss).unwrap() < 0.0);
    }

    /// Quadrature of the printed y'(x) reproduces the closed form.
    #[test]
    fn profile_matches_quadrature_of_derivative() {
        let sp = berger(0.4);
        let h = 0.5;
        let a = sphere_half_domain(h, &sp).unwrap();
        let spec = QuadratureSpec::default();
        for k in 1..20 {
            let x = a * k as f64 / 20.0;
            let tail =
                integrate_endpoint_singular(|u| sphere_profile_y_prime(u, h, &sp).unwrap(), x, a, &spec)
                    .unwrap();
            assert_abs_diff_eq!(sphere_profile_y(x, h, &sp).unwrap(), -tail, epsilon = 1e-8);
        }
    }

    /// Sl(2,R): y decreasing from y(x1) = 0 and strictly convex; meets the
    /// axis end at a negative pole angle.
    #[test]
    fn sl2r_profile_monotone_and_convex() {
        let sp = SpaceParams::sl2r(-4.0, 1.0).unwrap();
        let h = 1.2;
        let a = sphere_half_domain(h, &sp).unwrap();
        let n = 60;
        let xs: Vec<f64> = (0..=n).map(|i| -a + a * i as f64 / n as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| sphere_profile_y(x, h, &sp).unwrap()).collect();
        for i in 1..=n {
            assert!(ys[i] < ys[i - 1] + 1e-14, "y not decreasing at {}", xs[i]);
        }
        // convexity of y(x): second differences positive away from the singular end
        for i in 2..n {
            let dd = ys[i + 1] - 2.0 * ys[i] + ys[i - 1];
            assert!(dd > -1e-10, "y not convex at {}", xs[i]);
        }
        assert!(ys[n] > -PI); // this sphere is embedded
    }

    #[test]
    fn immersion_limits_land_on_axis() {
        let sp = berger(0.4);
        let h = 0.7;
        let a = sphere_half_domain(h, &sp).unwrap();
        let p = sphere_immersion(-a + 1e-9, 0.3, h, &sp).unwrap();
        // (e^{i y(0)}, 0) up to 1e-9 smoothing
        let y0 = sphere_y0(h, &sp).unwrap();
        assert_abs_diff_eq!(p.z.re, y0.cos(), epsilon = 1e-8);
        assert_abs_diff_eq!(p.z.im, y0.sin(), epsilon = 1e-8);
        assert!(p.w.norm() < 2e-9);
        // continuity across the equator seam
        let pm = sphere_immersion(-1e-12, 0.3, h, &sp).unwrap();
        let pp = sphere_immersion(1e-12, 0.3, h, &sp).unwrap();
        assert!((pm.z - pp.z).norm() < 1e-10 && (pm.w - pp.w).norm() < 1e-10);
    }

    #[test]
    fn immersion_points_lie_on_quadric() {
        for sp in [berger(0.4), SpaceParams::sl2r(-4.0, 1.0).unwrap()] {
            let h = if sp.is_berger() { 0.7 } else { 1.3 };
            let a = sphere_half_domain(h, &sp).unwrap();
            for i in 1..10 {
                let x = -a + 2.0 * a * i as f64 / 10.0;
                let p = sphere_immersion(x, 0.4, h, &sp).unwrap();
                assert!(p.quadric_residual(&sp).abs() < 1e-12);
            }
        }
    }

    /// Gauss-Bonnet: the total turning -int u'' dx equals 2, checked through
    /// the asymptotic slopes of u = ln(e^{2u})/2.
    #[test]
    fn conformal_factor_gauss_bonnet() {
        let sp = berger(0.4);
        let h = 0.7;
        let uu = |x: f64| 0.5 * conformal_factor(x, h, &sp).unwrap().ln();
        let fd = |x: f64| (uu(x + 1e-5) - uu(x - 1e-5)) / 2e-5;
        let total_turn = fd(-20.0) - fd(20.0);
        assert_abs_diff_eq!(total_turn, 2.0, epsilon = 1e-7);
        // decay like cosh^-2
        assert!(conformal_factor(30.0, h, &sp).unwrap() < 1e-20);
    }

    /// 2 pi int e^{2u} equals the closed-form area.
    #[test]
    fn area_equals_conformal_integral() {
        let spec = QuadratureSpec::default();
        for sp in [berger(0.4), berger(0.8), SpaceParams::sl2r(-4.0, 0.8).unwrap()] {
            for h in [0.0, 0.7, 1.5] {
                if 4.0 * h * h + sp.kappa <= 0.0 {
                    continue;
                }
                let i =
                    integrate_endpoint_singular(|x| conformal_factor(x, h, &sp).unwrap(), -40.0, 40.0, &spec)
                        .unwrap();
                assert_relative_eq!(
                    sphere_area(h, &sp).unwrap(),
                    2.0 * PI * i,
                    max_relative = 1e-8
                );
            }
        }
    }

    /// Near kappa = 4 tau^2 both printed branches collapse to the round value.
    #[test]
    fn area_branches_agree_at_removable_singularity() {
        for h in [0.0, 0.5, 1.0, 2.0] {
            let lo = SpaceParams::berger(4.0, 1.0 - 1e-4).unwrap();
            let hi = SpaceParams::berger(4.0, 1.0 + 1e-4).unwrap();
            let a_lo = sphere_area(h, &lo).unwrap();
            let a_hi = sphere_area(h, &hi).unwrap();
            let round = 4.0 * PI / (1.0 + h * h);
            assert_relative_eq!(a_lo, a_hi, max_relative = 1e-3);
            assert_relative_eq!(a_lo, round, max_relative = 1e-3);
            assert!((a_lo - round) * (a_hi - round) <= 1e-12, "branches must bracket the round value");
        }
        // branch agreement much closer to the singular locus
        let lo = SpaceParams::berger(4.0, (1.0f64 - 2.5e-7).sqrt()).unwrap();
        let hi = SpaceParams::berger(4.0, (1.0f64 + 2.5e-7).sqrt()).unwrap();
        assert_relative_eq!(
            sphere_area(0.7, &lo).unwrap(),
            sphere_area(0.7, &hi).unwrap(),
            max_relative = 1e-4
        );
    }

    #[test]
    fn volume_limits_and_monotonicity() {
        let sp = berger(0.4);
        let half = 16.0 * PI * PI * sp.tau / (sp.kappa * sp.kappa);
        assert_abs_diff_eq!(sphere_volume(0.0, &sp).unwrap(), half, epsilon = 1e-14);
        assert_abs_diff_eq!(2.0 * half, total_volume(&sp).unwrap(), epsilon = 1e-14);
        let mut prev = sphere_volume(1e-6, &sp).unwrap();
        for i in 1..=50 {
            let h = 5.0 * i as f64 / 50.0;
            let v = sphere_volume(h, &sp).unwrap();
            assert!(v < prev, "volume must decrease in H (H = {h})");
            prev = v;
        }
        assert!(matches!(
            sphere_volume(1.0, &SpaceParams::sl2r(-4.0, 1.0).unwrap()),
            Err(Error::BergerOnly)
        ));
    }

    #[test]
    fn torus_values_at_h0_and_infinity() {
        let sp = berger(0.5);
        let (area, vol) = torus_area_volume(0.0, &sp).unwrap();
        assert_abs_diff_eq!(area, 2.0 * PI * PI * sp.tau, epsilon = 1e-12);
        assert_abs_diff_eq!(vol, PI * PI * sp.tau, epsilon = 1e-12);
        let (area_inf, vol_inf) = torus_area_volume(1e6, &sp).unwrap();
        assert!(area_inf < 1e-4 && vol_inf < 1e-4 && vol_inf > 0.0);
    }

    #[test]
    fn clifford_radii() {
        let sp = berger(0.4);
        assert_abs_diff_eq!(
            clifford_radius(0.0, RadiusSign::Plus, &sp).unwrap(),
            0.5_f64.sqrt(),
            epsilon = 1e-15
        );
        for h in [0.0, 0.3, 1.7] {
            let rp = clifford_radius(h, RadiusSign::Plus, &sp).unwrap();
            let rm = clifford_radius(h, RadiusSign::Minus, &sp).unwrap();
            assert_abs_diff_eq!(rp * rp + rm * rm, 1.0, epsilon = 1e-14);
            assert!(rp > 0.0 && rp < 1.0 && rm > 0.0 && rm < 1.0);
        }
    }
}
