//! Admissibility of (H, E), turning bands, period integrals, compactness
//! witnesses, and the full classification of rotationally invariant CMC
//! surfaces in both spaces.

use serde::Serialize;

use crate::closed_form;
use crate::error::{Error, Result};
use crate::numerics::{integrate_endpoint_singular, rational_approx, QuadratureSpec};
use crate::space::{SpaceKind, SpaceParams};

/// Mean curvature H (canonically >= 0) and energy E, the two invariants
/// classifying a rotationally invariant CMC surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowParams {
    pub h: f64,
    pub e: f64,
}

impl FlowParams {
    pub fn new(h: f64, e: f64) -> Self {
        Self { h, e }
    }
}

/// Tolerance for resolving the discontinuous equality branches (E = 0,
/// E = -H, interval endpoints); callers pass analytically exact values.
pub const ENERGY_EQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnergyRange {
    /// Berger: closed interval.
    Interval { lo: f64, hi: f64 },
    /// Sl(2,R): open half line E < hi.
    HalfLineBelow { hi: f64 },
    /// Sl(2,R) with 4H^2 + kappa < 0: every energy is admissible.
    All,
}

/// Admissible energies for mean curvature `h`.
pub fn admissible_energy_range(h: f64, sp: &SpaceParams) -> EnergyRange {
    let d = 4.0 * h * h + sp.kappa;
    match sp.kind {
        SpaceKind::BergerSphere => {
            let r = d.sqrt();
            EnergyRange::Interval { lo: (-2.0 * h - r) / 4.0, hi: (-2.0 * h + r) / 4.0 }
        }
        SpaceKind::Sl2R => {
            if d > 0.0 {
                EnergyRange::HalfLineBelow { hi: (2.0 * h - d.sqrt()) / 4.0 }
            } else if d == 0.0 {
                EnergyRange::HalfLineBelow { hi: h / 2.0 }
            } else {
                EnergyRange::All
            }
        }
    }
}

impl EnergyRange {
    pub fn contains(&self, e: f64) -> bool {
        match *self {
            EnergyRange::Interval { lo, hi } => e >= lo - ENERGY_EQ_TOL && e <= hi + ENERGY_EQ_TOL,
            EnergyRange::HalfLineBelow { hi } => e < hi,
            EnergyRange::All => true,
        }
    }
}

pub fn admissible(fp: &FlowParams, sp: &SpaceParams) -> bool {
    fp.h >= 0.0 && admissible_energy_range(fp.h, sp).contains(fp.e)
}

/// The turning band of the squared profile coordinate (sin^2 x in the
/// Berger sphere, sinh^2 x in Sl(2,R)), together with the chart bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum TurningBand {
    TwoSided { t1: f64, t2: f64, x_lo: f64, x_hi: f64 },
    OneSidedUnbounded { t1: f64, x_hi: f64 },
    Degenerate { t: f64, x: f64 },
}

impl TurningBand {
    pub fn band_polynomial(&self, t: f64, fp: &FlowParams, sp: &SpaceParams) -> f64 {
        band_polynomial(t, fp, sp)
    }
}

/// The quadratic p with p(sin^2 x) <= 0 (Berger) / p(sinh^2 x) >= 0 (Sl2R)
/// along solutions; its roots bound the band.
pub fn band_polynomial(t: f64, fp: &FlowParams, sp: &SpaceParams) -> f64 {
    let (h, e, k) = (fp.h, fp.e, sp.kappa);
    match sp.kind {
        SpaceKind::BergerSphere => {
            (1.0 + 4.0 * h * h / k) * t * t - (1.0 - 8.0 * h * e / k) * t + 4.0 * e * e / k
        }
        SpaceKind::Sl2R => {
            (1.0 + 4.0 * h * h / k) * t * t + (1.0 + 8.0 * h * e / k) * t + 4.0 * e * e / k
        }
    }
}

/// Stable roots of a t^2 + b t + c, sorted ascending.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    let q = -0.5 * (b + b.signum() * r);
    let (mut t1, mut t2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    if t1 > t2 {
        std::mem::swap(&mut t1, &mut t2);
    }
    Some((t1, t2))
}

pub fn turning_points(fp: &FlowParams, sp: &SpaceParams) -> Result<TurningBand> {
    let (h, e, k) = (fp.h, fp.e, sp.kappa);
    if h < 0.0 {
        return Err(Error::InvalidParams("H must be nonnegative".into()));
    }
    let d = 4.0 * h * h + k;
    match sp.kind {
        SpaceKind::BergerSphere => {
            let range = admissible_energy_range(h, sp);
            let (lo, hi) = match range {
                EnergyRange::Interval { lo, hi } => (lo, hi),
                _ => unreachable!(),
            };
            if e < lo - ENERGY_EQ_TOL || e > hi + ENERGY_EQ_TOL {
                return Err(Error::InadmissibleEnergy { h, e });
            }
            if (e - lo).abs() <= ENERGY_EQ_TOL || (e - hi).abs() <= ENERGY_EQ_TOL {
                let t = (k - 8.0 * h * e) / (2.0 * d);
                return Ok(TurningBand::Degenerate { t, x: t.sqrt().asin() });
            }
            let a = 1.0 + 4.0 * h * h / k;
            let b = -(1.0 - 8.0 * h * e / k);
            let c = 4.0 * e * e / k;
            // |E| = |E - 0| below tolerance: the lower root is exactly 0
            let (t1, t2) = if e.abs() <= ENERGY_EQ_TOL {
                (0.0, -b / a)
            } else if (e + h).abs() <= ENERGY_EQ_TOL {
                // pole case: the upper root is exactly 1
                (c / a, 1.0)
            } else {
                quadratic_roots(a, b, c).ok_or(Error::InadmissibleEnergy { h, e })?
            };
            let t1 = t1.clamp(0.0, 1.0);
            let t2 = t2.clamp(0.0, 1.0);
            Ok(TurningBand::TwoSided {
                t1,
                t2,
                x_lo: t1.sqrt().asin(),
                x_hi: t2.sqrt().asin(),
            })
        }
        SpaceKind::Sl2R => {
            if d > 0.0 {
                if !admissible_energy_range(h, sp).contains(e) {
                    return Err(Error::InadmissibleEnergy { h, e });
                }
                let a = 1.0 + 4.0 * h * h / k; // negative
                let b = 1.0 + 8.0 * h * e / k;
                let c = 4.0 * e * e / k;
                let (t1, t2) = if e.abs() <= ENERGY_EQ_TOL {
                    (0.0, -b / a)
                } else {
                    quadratic_roots(a, b, c).ok_or(Error::InadmissibleEnergy { h, e })?
                };
                let t1 = t1.max(0.0);
                // working chart is x <= 0: sinh^2 in [t1, t2] puts x in
                // [-asinh sqrt(t2), -asinh sqrt(t1)]
                Ok(TurningBand::TwoSided {
                    t1,
                    t2,
                    x_lo: -t2.sqrt().asinh(),
                    x_hi: -t1.sqrt().asinh(),
                })
            } else if d < 0.0 {
                let a = 1.0 + 4.0 * h * h / k; // positive here
                let b = 1.0 + 8.0 * h * e / k;
                let c = 4.0 * e * e / k;
                let t1 = if e.abs() <= ENERGY_EQ_TOL {
                    0.0
                } else {
                    let (_, hi) = quadratic_roots(a, b, c).ok_or(Error::InadmissibleEnergy { h, e })?;
                    hi.max(0.0)
                };
                Ok(TurningBand::OneSidedUnbounded { t1, x_hi: -t1.sqrt().asinh() })
            } else {
                // 4H^2 + kappa = 0
                if !(e < h / 2.0) {
                    return Err(Error::InadmissibleEnergy { h, e });
                }
                let t1 = if e.abs() <= ENERGY_EQ_TOL { 0.0 } else { e * e / (h * (h - 2.0 * e)) };
                Ok(TurningBand::OneSidedUnbounded { t1, x_hi: -t1.sqrt().asinh() })
            }
        }
    }
}

/// dy/dx along the profile on the energy shell (the period integrand).
/// `x` is the Berger latitude in (0, pi/2) or the Sl(2,R) coordinate
/// magnitude (the integrand is even in x there).
pub fn period_integrand(x: f64, fp: &FlowParams, sp: &SpaceParams) -> f64 {
    let b = sp.bundle_ratio();
    let (h, e, k, tau) = (fp.h, fp.e, sp.kappa, sp.tau);
    match sp.kind {
        SpaceKind::BergerSphere => {
            let (s, c) = x.sin_cos();
            let u = e + h * s * s;
            let rad = s * s * c * c - 4.0 / k * u * u;
            u * (c * c + b * s * s).sqrt() / (tau * c * rad.max(0.0).sqrt())
        }
        SpaceKind::Sl2R => {
            let (s, c) = (x.sinh(), x.cosh());
            let u = e + h * s * s;
            let rad = s * s * c * c + 4.0 / k * u * u;
            u * (c * c - b * s * s).sqrt() / (tau * c * rad.max(0.0).sqrt())
        }
    }
}

/// Signed y-advance of one full profile oscillation,
/// T = 2 int_{x1}^{x2} dy/dx dx.
pub fn period_signed(fp: &FlowParams, sp: &SpaceParams, spec: &QuadratureSpec) -> Result<f64> {
    let band = turning_points(fp, sp)?;
    let (x1, x2) = match band {
        TurningBand::TwoSided { t1, t2, .. } => {
            if t2 - t1 < 1e-12 {
                return Err(Error::DegenerateBand);
            }
            // even integrand: integrate over the positive-coordinate image
            match sp.kind {
                SpaceKind::BergerSphere => (t1.sqrt().asin(), t2.sqrt().asin()),
                SpaceKind::Sl2R => (t1.sqrt().asinh(), t2.sqrt().asinh()),
            }
        }
        TurningBand::Degenerate { .. } => return Err(Error::DegenerateBand),
        TurningBand::OneSidedUnbounded { .. } => return Err(Error::UnboundedBand),
    };
    if sp.is_berger() && (fp.e + fp.h).abs() <= ENERGY_EQ_TOL && fp.h > 0.0 {
        // band reaches the pole; the oscillation period is not defined
        return Err(Error::DegenerateBand);
    }
    let v = integrate_endpoint_singular(|x| period_integrand(x, fp, sp), x1, x2, spec)?;
    Ok(2.0 * v)
}

/// |T|: the period of the profile oscillation.  Compactness depends only on
/// T modulo sign ("rational multiple of pi").
pub fn period(fp: &FlowParams, sp: &SpaceParams, spec: &QuadratureSpec) -> Result<f64> {
    Ok(period_signed(fp, sp, spec)?.abs())
}

/// y(s1) for the Berger pole-chain case E = -H: the signed y-advance from
/// the turning point to the first pole crossing.  The integrand is written
/// with the cos^2 factor of E + H sin^2 x cancelled, which keeps it regular
/// at the pole.
pub fn pole_chain_y1(fp: &FlowParams, sp: &SpaceParams, spec: &QuadratureSpec) -> Result<f64> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    let (h, k, tau) = (fp.h, sp.kappa, sp.tau);
    if (fp.e + h).abs() > ENERGY_EQ_TOL || h <= 0.0 {
        return Err(Error::InvalidParams("pole-chain advance needs E = -H, H > 0".into()));
    }
    let b = sp.bundle_ratio();
    let x1 = (2.0 * h / (4.0 * h * h + k).sqrt()).asin();
    integrate_endpoint_singular(
        |x| {
            let (s, c) = x.sin_cos();
            let rad = s * s - 4.0 / k * h * h * c * c;
            -h * (c * c + b * s * s).sqrt() / (tau * rad.max(0.0).sqrt())
        },
        x1,
        std::f64::consts::FRAC_PI_2,
        spec,
    )
}

/// A numeric witness that a ratio is (close to) the rational p/q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalWitness {
    pub p: i64,
    pub q: u64,
    pub residual: f64,
}

/// Continued-fraction witness that T is a rational multiple of pi:
/// T/pi = p/q with denominator <= qmax and residual <= tol.
pub fn compactness_test(t_period: f64, tol: f64, qmax: u64) -> Option<RationalWitness> {
    if !(t_period > 0.0) {
        return None;
    }
    let ratio = t_period / std::f64::consts::PI;
    let (p, q, residual) = rational_approx(ratio, qmax);
    (residual <= tol).then_some(RationalWitness { p, q, residual })
}

/// Witness that `value` is a rational multiple of 2 pi.
pub fn rational_multiple_of_two_pi(value: f64, tol: f64, qmax: u64) -> Option<RationalWitness> {
    let ratio = value / (2.0 * std::f64::consts::PI);
    let (p, q, residual) = rational_approx(ratio, qmax);
    (residual <= tol).then_some(RationalWitness { p, q, residual })
}

/// The classification of a complete rotationally invariant CMC surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SurfaceClass {
    /// E = H = 0 (Berger): the great 2-sphere {Im z = 0}, always embedded.
    GreatSphere,
    /// E = 0, sphere regime: rotational CMC sphere with pole angle y0.
    Sphere { embedded: bool, y0: f64 },
    /// Degenerate band (Berger): orbit torus of constant latitude.
    CliffordTorus { r: f64 },
    /// E > 0 or E < -H: unduloid-type.  Compact iff T is a rational
    /// multiple of pi; embedded iff T = 2 pi / k.
    Unduloid { t_period: f64, compact: Option<RationalWitness>, embedded: bool },
    /// -H < E < 0: nodoid-type, always immersed.
    Nodoid { t_period: f64, compact: Option<RationalWitness> },
    /// E = -H (Berger): chain of arcs through the pole.  Compact iff y(s1)
    /// is a rational multiple of 2 pi; embedded torus iff y(s1) = -pi/2.
    PoleChain { y_s1: f64, compact: Option<RationalWitness>, embedded_torus: bool },
    /// Sl(2,R), 4H^2 + kappa <= 0, E = 0: complete open graph meeting the axis.
    OpenSphereGraph,
    /// Sl(2,R), 4H^2 + kappa <= 0, E > 0.
    OpenUnduloidGraph,
    /// Sl(2,R), 4H^2 + kappa <= 0, E < 0.
    OpenNodoidGraph,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOpts {
    /// residual tolerance of the rationality witness
    pub tol: f64,
    /// largest denominator searched
    pub qmax: u64,
    pub quad: QuadratureSpec,
}

impl Default for ClassifyOpts {
    fn default() -> Self {
        Self { tol: 1e-9, qmax: 10_000, quad: QuadratureSpec::default() }
    }
}

pub fn classify(fp: &FlowParams, sp: &SpaceParams, opts: &ClassifyOpts) -> Result<SurfaceClass> {
    let (h, e) = (fp.h, fp.e);
    if h < 0.0 || !h.is_finite() || !e.is_finite() {
        return Err(Error::InvalidParams("need finite E and H >= 0".into()));
    }
    match sp.kind {
        SpaceKind::BergerSphere => {
            let EnergyRange::Interval { lo, hi } = admissible_energy_range(h, sp) else {
                unreachable!()
            };
            if e < lo - ENERGY_EQ_TOL || e > hi + ENERGY_EQ_TOL {
                return Err(Error::InadmissibleEnergy { h, e });
            }
            if (e - hi).abs() <= ENERGY_EQ_TOL {
                let r = closed_form::clifford_radius(h, closed_form::RadiusSign::Plus, sp)?;
                return Ok(SurfaceClass::CliffordTorus { r });
            }
            if (e - lo).abs() <= ENERGY_EQ_TOL {
                let r = closed_form::clifford_radius(h, closed_form::RadiusSign::Minus, sp)?;
                return Ok(SurfaceClass::CliffordTorus { r });
            }
            if e.abs() <= ENERGY_EQ_TOL {
                if h <= ENERGY_EQ_TOL {
                    return Ok(SurfaceClass::GreatSphere);
                }
                let y0 = closed_form::sphere_y0(h, sp)?;
                return Ok(SurfaceClass::Sphere { embedded: y0 > -std::f64::consts::PI, y0 });
            }
            if (e + h).abs() <= ENERGY_EQ_TOL {
                let y1 = pole_chain_y1(fp, sp, &opts.quad)?;
                let compact = rational_multiple_of_two_pi(y1, opts.tol, opts.qmax);
                let embedded_torus = (y1 + std::f64::consts::FRAC_PI_2).abs() <= opts.tol;
                return Ok(SurfaceClass::PoleChain { y_s1: y1, compact, embedded_torus });
            }
            let t = period(fp, sp, &opts.quad)?;
            let compact = compactness_test(t, opts.tol, opts.qmax);
            if e > 0.0 || e < -h {
                let embedded = compact.map(|w| w.p == 1 || w.p == 2).unwrap_or(false);
                Ok(SurfaceClass::Unduloid { t_period: t, compact, embedded })
            } else {
                Ok(SurfaceClass::Nodoid { t_period: t, compact })
            }
        }
        SpaceKind::Sl2R => {
            let d = 4.0 * h * h + sp.kappa;
            if d > 0.0 {
                if !admissible_energy_range(h, sp).contains(e) {
                    return Err(Error::InadmissibleEnergy { h, e });
                }
                if e.abs() <= ENERGY_EQ_TOL {
                    let y0 = closed_form::sphere_y0(h, sp)?;
                    return Ok(SurfaceClass::Sphere { embedded: y0 > -std::f64::consts::PI, y0 });
                }
                let t = period(fp, sp, &opts.quad)?;
                let compact = compactness_test(t, opts.tol, opts.qmax);
                if e > 0.0 {
                    let embedded = compact.map(|w| w.p == 1 || w.p == 2).unwrap_or(false);
                    Ok(SurfaceClass::Unduloid { t_period: t, compact, embedded })
                } else {
                    Ok(SurfaceClass::Nodoid { t_period: t, compact })
                }
            } else {
                // no CMC spheres here; all solutions are immersed, non-compact graphs
                if !admissible(fp, sp) {
                    return Err(Error::InadmissibleEnergy { h, e });
                }
                if e.abs() <= ENERGY_EQ_TOL {
                    Ok(SurfaceClass::OpenSphereGraph)
                } else if e > 0.0 {
                    Ok(SurfaceClass::OpenUnduloidGraph)
                } else {
                    Ok(SurfaceClass::OpenNodoidGraph)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn berger(tau: f64) -> SpaceParams {
        SpaceParams::berger(4.0, tau).unwrap()
    }

    #[test]
    fn berger_minimal_energy_interval() {
        let sp = berger(0.4);
        let EnergyRange::Interval { lo, hi } = admissible_energy_range(0.0, &sp) else {
            panic!()
        };
        assert_abs_diff_eq!(lo, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn sl2r_half_line() {
        let sp = SpaceParams::sl2r(-4.0, 1.0).unwrap();
        let EnergyRange::HalfLineBelow { hi } = admissible_energy_range(1.25, &sp) else {
            panic!()
        };
        assert_abs_diff_eq!(hi, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn interval_endpoints_are_degenerate() {
        let sp = berger(0.4);
        for h in [0.0, 0.3, 1.0, 2.5] {
            let EnergyRange::Interval { lo, hi } = admissible_energy_range(h, &sp) else {
                panic!()
            };
            // endpoints solve 16E^2 + 16HE - kappa = 0
            for e in [lo, hi] {
                assert_abs_diff_eq!(16.0 * e * e + 16.0 * h * e - sp.kappa, 0.0, epsilon = 1e-11);
                assert!(matches!(
                    turning_points(&FlowParams::new(h, e), &sp).unwrap(),
                    TurningBand::Degenerate { .. }
                ));
            }
        }
    }

    #[test]
    fn berger_band_examples() {
        let sp = berger(0.4);
        // E = 0, H > 0: [0, kappa/(4H^2+kappa)]
        let h = 0.8;
        match turning_points(&FlowParams::new(h, 0.0), &sp).unwrap() {
            TurningBand::TwoSided { t1, t2, .. } => {
                assert_eq!(t1, 0.0);
                assert_abs_diff_eq!(t2, sp.kappa / (4.0 * h * h + sp.kappa), epsilon = 1e-14);
            }
            other => panic!("unexpected band {other:?}"),
        }
        // degenerate at H = 0: t = 1/2
        match turning_points(&FlowParams::new(0.0, 0.5), &sp).unwrap() {
            TurningBand::Degenerate { t, .. } => assert_abs_diff_eq!(t, 0.5, epsilon = 1e-14),
            other => panic!("unexpected band {other:?}"),
        }
    }

    #[test]
    fn band_roots_satisfy_polynomial() {
        let sp = berger(0.4);
        for (h, e) in [(0.0, 0.3), (1.0, -0.4), (0.7, 0.2), (1.0, -0.99)] {
            let fp = FlowParams::new(h, e);
            match turning_points(&fp, &sp).unwrap() {
                TurningBand::TwoSided { t1, t2, .. } => {
                    assert_abs_diff_eq!(band_polynomial(t1, &fp, &sp), 0.0, epsilon = 1e-10);
                    assert_abs_diff_eq!(band_polynomial(t2, &fp, &sp), 0.0, epsilon = 1e-10);
                }
                other => panic!("unexpected band {other:?}"),
            }
        }
        let ss = SpaceParams::sl2r(-4.0, 1.0).unwrap();
        // 4H^2 + kappa < 0: one-sided band, root check
        let fp = FlowParams::new(0.8, -0.3);
        match turning_points(&fp, &ss).unwrap() {
            TurningBand::OneSidedUnbounded { t1, .. } => {
                assert_abs_diff_eq!(band_polynomial(t1, &fp, &ss), 0.0, epsilon = 1e-10);
                assert!(t1 > 0.0);
            }
            other => panic!("unexpected band {other:?}"),
        }
    }

    #[test]
    fn frozen_period_values() {
        // independently computed with adaptive quadrature elsewhere
        let sp = berger(0.4);
        let spec = QuadratureSpec::default();
        let t = period(&FlowParams::new(0.0, 0.3), &sp, &spec).unwrap();
        assert_relative_eq!(t, 7.015_663_487_269_79, max_relative = 1e-10);

        let ss = SpaceParams::sl2r(-4.0, 1.0).unwrap();
        let t = period(&FlowParams::new(1.25, 0.1), &ss, &spec).unwrap();
        assert_relative_eq!(t, 4.267_108_366_939_48, max_relative = 1e-10);
    }

    #[test]
    fn period_rejects_degenerate_and_unbounded_bands() {
        let sp = berger(0.4);
        assert!(matches!(
            period(&FlowParams::new(0.0, 0.5), &sp, &QuadratureSpec::default()),
            Err(Error::DegenerateBand)
        ));
        let ss = SpaceParams::sl2r(-4.0, 1.0).unwrap();
        assert!(matches!(
            period(&FlowParams::new(0.5, 0.1), &ss, &QuadratureSpec::default()),
            Err(Error::UnboundedBand)
        ));
    }

    #[test]
    fn compactness_witnesses() {
        assert_eq!(
            compactness_test(2.0 * PI, 1e-9, 100),
            Some(RationalWitness { p: 2, q: 1, residual: 0.0 })
        );
        assert_eq!(compactness_test(PI * (1.0 + 1e-3), 1e-6, 10), None);
        let w = compactness_test(PI * 355.0 / 113.0 + 1e-12, 1e-9, 200).unwrap();
        assert_eq!((w.p, w.q), (355, 113));
    }

    #[test]
    fn classify_hits_every_berger_branch() {
        let sp = berger(0.4);
        let opts = ClassifyOpts::default();
        assert_eq!(classify(&FlowParams::new(0.0, 0.0), &sp, &opts).unwrap(), SurfaceClass::GreatSphere);
        match classify(&FlowParams::new(0.7, 0.0), &sp, &opts).unwrap() {
            SurfaceClass::Sphere { embedded, y0 } => {
                assert!(embedded && y0 > -PI && y0 < 0.0);
            }
            other => panic!("{other:?}"),
        }
        match classify(&FlowParams::new(0.0, 0.5), &sp, &opts).unwrap() {
            SurfaceClass::CliffordTorus { r } => assert_abs_diff_eq!(r, 0.5f64.sqrt(), epsilon = 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            classify(&FlowParams::new(0.0, 0.3), &sp, &opts).unwrap(),
            SurfaceClass::Unduloid { .. }
        ));
        assert!(matches!(
            classify(&FlowParams::new(1.0, -0.3), &sp, &opts).unwrap(),
            SurfaceClass::Nodoid { .. }
        ));
        assert!(matches!(
            classify(&FlowParams::new(1.0, -1.0), &sp, &opts).unwrap(),
            SurfaceClass::PoleChain { .. }
        ));
        // E < -H unduloid branch
        assert!(matches!(
            classify(&FlowParams::new(0.3, -0.8), &sp, &opts).unwrap(),
            SurfaceClass::Unduloid { .. }
        ));
        assert!(classify(&FlowParams::new(0.0, 0.51), &sp, &opts).is_err());
    }

    #[test]
    fn classify_sl2r_branches_and_sphere_gate() {
        let ss = SpaceParams::sl2r(-4.0, 1.0).unwrap();
        let opts = ClassifyOpts::default();
        // 4H^2 + kappa <= 0: never a sphere
        assert_eq!(
            classify(&FlowParams::new(0.9, 0.0), &ss, &opts).unwrap(),
            SurfaceClass::OpenSphereGraph
        );
        assert_eq!(
            classify(&FlowParams::new(0.5, 0.7), &ss, &opts).unwrap(),
            SurfaceClass::OpenUnduloidGraph
        );
        assert_eq!(
            classify(&FlowParams::new(1.0, -0.7), &ss, &opts).unwrap(),
            SurfaceClass::OpenNodoidGraph
        );
        // sphere regime
        assert!(matches!(
            classify(&FlowParams::new(1.25, 0.0), &ss, &opts).unwrap(),
            SurfaceClass::Sphere { .. }
        ));
        assert!(matches!(
            classify(&FlowParams::new(1.25, 0.1), &ss, &opts).unwrap(),
            SurfaceClass::Unduloid { .. }
        ));
        assert!(matches!(
            classify(&FlowParams::new(1.25, -0.4), &ss, &opts).unwrap(),
            SurfaceClass::Nodoid { .. }
        ));
        // inadmissible above the half-line
        assert!(classify(&FlowParams::new(1.25, 0.30), &ss, &opts).is_err());
    }

    #[test]
    fn pole_chain_y1_matches_prototype() {
        // frozen from an independent adaptive-quadrature computation
        let sp = berger(0.2);
        let y1 = pole_chain_y1(&FlowParams::new(0.3, -0.3), &sp, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(y1, -2.843_404_347, max_relative = 1e-8);
    }

    #[test]
    fn unduloid_embeddedness_requires_t_eq_two_pi_over_k() {
        // T = 2pi -> witness (2,1) -> embedded
        let w = compactness_test(2.0 * PI, 1e-9, 100).unwrap();
        assert!(w.p == 2 || w.p == 1);
        // T = 3pi/2 -> witness (3,2) -> not embedded
        let w = compactness_test(1.5 * PI, 1e-9, 100).unwrap();
        assert_eq!((w.p, w.q), (3, 2));
    }
}
