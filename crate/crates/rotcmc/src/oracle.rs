//! Independent numerical oracles: mean curvature, area, enclosed volume by
//! the co-area route, and the normal tilt, computed for arbitrary
//! parametrised surfaces from first principles (first/second fundamental
//! forms through the frame connection).  These never look inside the
//! closed-form module; agreement between the two routes is what the tests
//! assert.

use crate::closed_form;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, integrate_endpoint_singular, QuadratureSpec};
use crate::space::{
    force_tangent, unit_connection, unit_frame_coefficients, AmbientPoint, AmbientVector,
    SpaceParams,
};
use num_complex::Complex64;

type MapFn<'a> = Box<dyn Fn(f64, f64) -> AmbientPoint + Sync + 'a>;
type DerivFn<'a> = Box<dyn Fn(f64, f64) -> AmbientVector + Sync + 'a>;

/// A parametrised surface patch (s, t) -> E(kappa, tau).
///
/// When analytic partial derivatives are supplied the finite-difference
/// step of the curvature oracle can be much smaller (the coefficient
/// fields are then exact); otherwise a balanced step is chosen.
pub struct SurfaceSampler<'a> {
    pub map: MapFn<'a>,
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    pub d_ds: Option<DerivFn<'a>>,
    pub d_dt: Option<DerivFn<'a>>,
}

impl<'a> SurfaceSampler<'a> {
    pub fn new<F>(map: F, s_range: (f64, f64), t_range: (f64, f64)) -> Self
    where
        F: Fn(f64, f64) -> AmbientPoint + Sync + 'a,
    {
        Self { map: Box::new(map), s_range, t_range, d_ds: None, d_dt: None }
    }

    pub fn with_derivatives<Fs, Ft>(mut self, d_ds: Fs, d_dt: Ft) -> Self
    where
        Fs: Fn(f64, f64) -> AmbientVector + Sync + 'a,
        Ft: Fn(f64, f64) -> AmbientVector + Sync + 'a,
    {
        self.d_ds = Some(Box::new(d_ds));
        self.d_dt = Some(Box::new(d_dt));
        self
    }

    pub fn analytic(&self) -> bool {
        self.d_ds.is_some() && self.d_dt.is_some()
    }

    fn point(&self, s: f64, t: f64) -> AmbientPoint {
        (self.map)(s, t)
    }

    /// Tangent vectors by analytic derivative or central difference,
    /// projected onto the tangent space of the quadric.
    fn tangents(&self, s: f64, t: f64, h: f64, sp: &SpaceParams) -> (AmbientVector, AmbientVector) {
        let p = self.point(s, t);
        let vs = match &self.d_ds {
            Some(f) => f(s, t),
            None => {
                let (a, b) = (self.point(s + h, t), self.point(s - h, t));
                AmbientVector::new((a.z - b.z) / (2.0 * h), (a.w - b.w) / (2.0 * h))
            }
        };
        let vt = match &self.d_dt {
            Some(f) => f(s, t),
            None => {
                let (a, b) = (self.point(s, t + h), self.point(s, t - h));
                AmbientVector::new((a.z - b.z) / (2.0 * h), (a.w - b.w) / (2.0 * h))
            }
        };
        (force_tangent(&vs, &p, sp), force_tangent(&vt, &p, sp))
    }

    /// Orthonormal-frame coefficients of the two tangent fields at (s, t).
    fn coeff_fields(&self, s: f64, t: f64, h: f64, sp: &SpaceParams) -> Result<([f64; 3], [f64; 3])> {
        let p = self.point(s, t);
        let (vs, vt) = self.tangents(s, t, h, sp);
        Ok((
            unit_frame_coefficients(&vs, &p, sp)?,
            unit_frame_coefficients(&vt, &p, sp)?,
        ))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOpts {
    /// finite-difference step; `None` picks 1e-5 (analytic derivatives) or
    /// 2e-4 (finite-difference derivatives)
    pub step: Option<f64>,
    pub richardson: bool,
}

impl Default for OracleOpts {
    fn default() -> Self {
        Self { step: None, richardson: true }
    }
}

fn default_step(surf: &SurfaceSampler) -> f64 {
    if surf.analytic() {
        1e-5
    } else {
        2e-4
    }
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Mean curvature and normal tilt at one parameter point, single step h.
fn mean_curvature_once(
    surf: &SurfaceSampler,
    at: (f64, f64),
    h: f64,
    sp: &SpaceParams,
) -> Result<(f64, f64)> {
    let (s, t) = at;
    let gamma = unit_connection(sp);
    let (a, b) = surf.coeff_fields(s, t, h, sp)?;

    // first fundamental form in the orthonormal frame
    let (ee, ff, gg) = (dot3(a, a), dot3(a, b), dot3(b, b));
    let det = ee * gg - ff * ff;
    if det <= 1e-14 * (ee * gg).max(1e-300) {
        return Err(Error::DegenerateSample { s, t });
    }
    let mut n = cross3(a, b);
    let nn = norm3(n);
    for v in &mut n {
        *v /= nn;
    }

    // derivatives of the coefficient fields
    let (a_sp, b_sp) = surf.coeff_fields(s + h, t, h, sp)?;
    let (a_sm, b_sm) = surf.coeff_fields(s - h, t, h, sp)?;
    let (_a_tp, b_tp) = surf.coeff_fields(s, t + h, h, sp)?;
    let (_a_tm, b_tm) = surf.coeff_fields(s, t - h, h, sp)?;
    let ds = |p: [f64; 3], m: [f64; 3]| {
        [(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h), (p[2] - m[2]) / (2.0 * h)]
    };
    let da_ds = ds(a_sp, a_sm);
    let db_ds = ds(b_sp, b_sm);
    let db_dt = ds(b_tp, b_tm);

    // nabla_X Y = sum_k (X y_k) e_k + sum_{i,j} x_i y_j Gamma[i][j]
    let covariant = |x: [f64; 3], y: [f64; 3], dy: [f64; 3]| -> [f64; 3] {
        let mut out = dy;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[k] += x[i] * y[j] * gamma[i][j][k];
                }
            }
        }
        out
    };
    let nss = covariant(a, a, da_ds);
    let nst = covariant(a, b, db_ds);
    let ntt = covariant(b, b, db_dt);

    let l = dot3(nss, n);
    let m = dot3(nst, n);
    let nn2 = dot3(ntt, n);
    let mean = (l * gg - 2.0 * m * ff + nn2 * ee) / (2.0 * det);
    // tilt: xi is the third orthonormal frame vector
    Ok((mean, n[2]))
}

/// Mean curvature of the immersed surface at `at`, with respect to the
/// normal Phi_s x Phi_t; one Richardson level by default.
pub fn numeric_mean_curvature(
    surf: &SurfaceSampler,
    at: (f64, f64),
    sp: &SpaceParams,
    opts: &OracleOpts,
) -> Result<f64> {
    let h = opts.step.unwrap_or_else(|| default_step(surf));
    let (c1, _) = mean_curvature_once(surf, at, h, sp)?;
    if !opts.richardson {
        return Ok(c1);
    }
    let (c2, _) = mean_curvature_once(surf, at, 0.5 * h, sp)?;
    Ok((4.0 * c2 - c1) / 3.0)
}

/// Normal tilt C = g(N, xi) at `at`, same conventions as the mean
/// curvature oracle.
pub fn numeric_normal_tilt(
    surf: &SurfaceSampler,
    at: (f64, f64),
    sp: &SpaceParams,
    opts: &OracleOpts,
) -> Result<f64> {
    let h = opts.step.unwrap_or_else(|| default_step(surf));
    let (_, t1) = mean_curvature_once(surf, at, h, sp)?;
    if !opts.richardson {
        return Ok(t1);
    }
    let (_, t2) = mean_curvature_once(surf, at, 0.5 * h, sp)?;
    Ok((4.0 * t2 - t1) / 3.0)
}

/// Surface area of the patch: the t-integral by composite Gauss-Legendre,
/// the s-integral by tanh-sinh (the parametrisations in use have at worst
/// inverse-square-root behaviour of sqrt(det g) at the s-endpoints).
pub fn numeric_area(surf: &SurfaceSampler, sp: &SpaceParams) -> Result<f64> {
    let h = 1e-6;
    let sqrt_det = |s: f64, t: f64| -> f64 {
        match surf.coeff_fields(s, t, h, sp) {
            Ok((a, b)) => {
                let det = dot3(a, a) * dot3(b, b) - dot3(a, b) * dot3(a, b);
                det.max(0.0).sqrt()
            }
            Err(_) => 0.0,
        }
    };
    let (t0, t1) = surf.t_range;
    let (s0, s1) = surf.s_range;
    let spec = QuadratureSpec { rel_tol: 1e-11, abs_tol: 1e-12, ..Default::default() };
    let mut prev = f64::INFINITY;
    let mut panels = 4usize;
    for _ in 0..7 {
        let (nodes, weights) = gauss_legendre(16);
        let mut total = 0.0;
        for p in 0..panels {
            let lo = t0 + (t1 - t0) * p as f64 / panels as f64;
            let hi = t0 + (t1 - t0) * (p + 1) as f64 / panels as f64;
            for (xi, wi) in nodes.iter().zip(&weights) {
                let t = lo + 0.5 * (hi - lo) * (xi + 1.0);
                let inner =
                    integrate_endpoint_singular(|s| sqrt_det(s, t), s0, s1, &spec)?;
                total += wi * 0.5 * (hi - lo) * inner;
            }
        }
        if (total - prev).abs() <= 1e-10 * total.abs().max(1.0) {
            return Ok(total);
        }
        prev = total;
        panels *= 2;
    }
    Ok(prev)
}

/// Enclosed volume of the Berger CMC sphere by the co-area route:
/// (64 pi tau / kappa^2) int_0^a sin t cos t |y(t)| dt, with the profile
/// half-width |y| from the closed-form module (the profile convention has
/// y <= 0).
pub fn numeric_volume_coarea(h: f64, sp: &SpaceParams, spec: &QuadratureSpec) -> Result<f64> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    let pi = std::f64::consts::PI;
    if h == 0.0 {
        // minimal sphere: the section half-width is pi/2 at every latitude
        let integral = integrate_endpoint_singular(
            |t| t.sin() * t.cos() * (pi / 2.0),
            0.0,
            std::f64::consts::FRAC_PI_2,
            spec,
        )?;
        return Ok(64.0 * pi * sp.tau / (sp.kappa * sp.kappa) * integral);
    }
    let a = closed_form::sphere_half_domain(h, sp)?;
    let integral = integrate_endpoint_singular(
        |t| t.sin() * t.cos() * (-closed_form::sphere_profile_y(t, h, sp).unwrap_or(0.0)),
        0.0,
        a,
        spec,
    )?;
    Ok(64.0 * pi * sp.tau / (sp.kappa * sp.kappa) * integral)
}

/// Sampler for the Clifford torus of radius r:
/// Phi(s, t) = (r e^{i s / r}, sqrt(1 - r^2) e^{i t}).
pub fn clifford_torus_sampler<'a>(r: f64) -> SurfaceSampler<'a> {
    let q = (1.0 - r * r).sqrt();
    let map = move |s: f64, t: f64| {
        AmbientPoint::new(
            r * Complex64::new((s / r).cos(), (s / r).sin()),
            q * Complex64::new(t.cos(), t.sin()),
        )
    };
    let pi = std::f64::consts::PI;
    SurfaceSampler::new(map, (0.0, 2.0 * pi * r), (0.0, 2.0 * pi)).with_derivatives(
        move |s: f64, _t: f64| {
            AmbientVector::new(
                Complex64::new(-(s / r).sin(), (s / r).cos()),
                Complex64::new(0.0, 0.0),
            )
        },
        move |_s: f64, t: f64| {
            AmbientVector::new(Complex64::new(0.0, 0.0), q * Complex64::new(-t.sin(), t.cos()))
        },
    )
}

/// Sampler for the Berger great 2-sphere {Im z = 0}:
/// Phi(u, t) = (cos u, sin u e^{i t}), u in (0, pi).
pub fn great_sphere_sampler<'a>() -> SurfaceSampler<'a> {
    let map = |u: f64, t: f64| {
        AmbientPoint::new(Complex64::new(u.cos(), 0.0), u.sin() * Complex64::new(t.cos(), t.sin()))
    };
    let pi = std::f64::consts::PI;
    SurfaceSampler::new(map, (0.0, pi), (0.0, 2.0 * pi)).with_derivatives(
        |u: f64, t: f64| {
            AmbientVector::new(Complex64::new(-u.sin(), 0.0), u.cos() * Complex64::new(t.cos(), t.sin()))
        },
        |u: f64, t: f64| {
            AmbientVector::new(Complex64::new(0.0, 0.0), u.sin() * Complex64::new(-t.sin(), t.cos()))
        },
    )
}

/// Sampler for one x-monotone half of the closed-form CMC sphere immersion;
/// `side < 0` is the x < 0 patch.  The profile derivative is supplied
/// analytically (the x-parametrisation is singular at the equator seam, so
/// finite differences across it would be useless).
pub fn cmc_sphere_sampler<'a>(h: f64, sp: &SpaceParams, side: f64) -> Result<SurfaceSampler<'a>> {
    let a = closed_form::sphere_half_domain(h, sp)?;
    let spc = *sp;
    let is_berger = sp.is_berger();
    let map = move |x: f64, t: f64| closed_form::sphere_immersion(x, t, h, &spc).unwrap();
    let neg = side < 0.0;
    let s_range = if neg { (-a, 0.0) } else { (0.0, a) };
    let pi = std::f64::consts::PI;
    // on each patch the point is (radial(u) e^{i ysign Y(u)}, fiber(u) e^{it})
    // with u = x + a (left) or a - x (right), Y the even profile extension
    let d_ds = move |x: f64, t: f64| {
        let (u, ysign, du_dx) = if neg { (x + a, 1.0, 1.0) } else { (a - x, -1.0, -1.0) };
        let yarg = if is_berger { u } else { -u };
        let y_u = closed_form::sphere_profile_y(yarg, h, &spc).unwrap_or(0.0);
        let ypr = closed_form::sphere_profile_y_prime(yarg, h, &spc).unwrap_or(0.0);
        let dy_du = if is_berger { ypr } else { -ypr };
        let y = ysign * y_u;
        let dy_dx = ysign * dy_du * du_dx;
        let (radial, dradial_du, dfiber_du) = if is_berger {
            (u.cos(), -u.sin(), u.cos())
        } else {
            (u.cosh(), u.sinh(), u.cosh())
        };
        let eiy = Complex64::new(y.cos(), y.sin());
        let i = Complex64::new(0.0, 1.0);
        AmbientVector::new(
            (dradial_du * du_dx + i * radial * dy_dx) * eiy,
            dfiber_du * du_dx * Complex64::new(t.cos(), t.sin()),
        )
    };
    let d_dt = move |x: f64, t: f64| {
        let u = a - x.abs();
        let fiber = if is_berger { u.sin() } else { u.sinh() };
        AmbientVector::new(Complex64::new(0.0, 0.0), fiber * Complex64::new(-t.sin(), t.cos()))
    };
    Ok(SurfaceSampler::new(map, s_range, (-pi, pi)).with_derivatives(d_ds, d_dt))
}
