//! Generating-curve dynamics: the profile ODE systems of both spaces, the
//! tilt function C, the energy first integral in singularity-free form, the
//! energy-reduced expressions for sin(alpha), cos(alpha) and alpha', and
//! event-driven arc-length integration with exact reflection continuation.
//!
//! Conventions.  The Berger profile lives on the chart x in (0, pi/2) with
//! gamma(s) = (cos x e^{iy}, sin x); the Sl(2,R) profile lives on x <= 0
//! with gamma(s) = (cosh x e^{iy}, sinh x).  alpha is the turning angle,
//! x' = cos(alpha), tracked as a continuous real without 2 pi wrapping.
//! The canonical orientation has H >= 0; the dynamics themselves accept any
//! sign of H (reversal and reflection symmetries swap it).

use serde::Serialize;

use crate::classify::{turning_points, FlowParams, TurningBand, ENERGY_EQ_TOL};
use crate::error::{Error, Result};
use crate::numerics::rk::{single_step, Dopri5, OdeOpts, State};
use crate::numerics::{integrate_endpoint_singular, QuadratureSpec};
use crate::space::{SpaceKind, SpaceParams};
use std::f64::consts::{FRAC_PI_2, PI};

/// One sample of the generating curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileState {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
}

impl ProfileState {
    pub fn new(s: f64, x: f64, y: f64, alpha: f64) -> Self {
        Self { s, x, y, alpha }
    }

    fn from_ode(s: f64, y: &State) -> Self {
        Self { s, x: y[0], y: y[1], alpha: y[2] }
    }

    fn ode_state(&self) -> State {
        [self.x, self.y, self.alpha]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// cos(alpha) = 0: the profile coordinate turns around.
    TurningPoint,
    /// The curve meets the rotation axis (x = 0) orthogonally.
    AxisTouch,
    /// Continuation switched to the exact reflection rule at this sample.
    Reflection,
    /// The curve runs into the orbit pole x = pi/2 (Berger, E = -H).
    PoleTouch,
}

/// An integrated generating curve: ordered samples plus event markers.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileCurve {
    pub samples: Vec<ProfileState>,
    pub events: Vec<(usize, EventKind)>,
}

impl ProfileCurve {
    pub fn turning_count(&self) -> usize {
        self.events.iter().filter(|(_, k)| *k == EventKind::TurningPoint).count()
    }

    pub fn events_at(&self, idx: usize) -> impl Iterator<Item = EventKind> + '_ {
        self.events.iter().filter(move |(i, _)| *i == idx).map(|(_, k)| *k)
    }

    /// Largest relative energy deviation along the samples.
    pub fn energy_drift(&self, fp: &FlowParams, sp: &SpaceParams) -> f64 {
        let scale = 1.0 + fp.e.abs();
        self.samples
            .iter()
            .map(|st| (energy(st.x, st.alpha, fp.h, sp) - fp.e).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// sin/sinh and cos/cosh of the profile coordinate, per space.
#[inline]
fn sc(x: f64, sp: &SpaceParams) -> (f64, f64) {
    match sp.kind {
        SpaceKind::BergerSphere => x.sin_cos(),
        SpaceKind::Sl2R => (x.sinh(), x.cosh()),
    }
}

/// The denominator cos^2 a (c^2 +/- b s^2) +/- b sin^2 a under the tilt and
/// energy expressions; positive on the working charts.
#[inline]
fn tilt_denom_sq(s: f64, c: f64, alpha: f64, sp: &SpaceParams) -> f64 {
    let b = sp.bundle_ratio();
    let (sa, ca) = alpha.sin_cos();
    match sp.kind {
        SpaceKind::BergerSphere => ca * ca * (c * c + b * s * s) + b * sa * sa,
        SpaceKind::Sl2R => ca * ca * (c * c - b * s * s) - b * sa * sa,
    }
}

/// Tilt C = <N, xi> of the unit normal against the unit Killing field,
/// evaluated along the rotational profile.  Always in [-1, 1].
pub fn tilt_c(x: f64, alpha: f64, sp: &SpaceParams) -> f64 {
    let (s, c) = sc(x, sp);
    c * alpha.cos() / tilt_denom_sq(s, c, alpha, sp).sqrt()
}

/// The energy first integral tau C s tan(alpha) - H s^2 (s = sin x or
/// sinh x), in the combined form with cos(alpha) cancelled, which stays
/// finite at turning points.
pub fn energy(x: f64, alpha: f64, h: f64, sp: &SpaceParams) -> f64 {
    let (s, c) = sc(x, sp);
    sp.tau * s * c * alpha.sin() / tilt_denom_sq(s, c, alpha, sp).sqrt() - h * s * s
}

/// Right-hand side of the profile system (x', y', alpha').
///
/// Fails with a singular flag on the rotation axis (where the alpha'
/// component is 0/0 off shell) and at the Berger orbit pole.
pub fn ode_rhs(state: &ProfileState, h: f64, sp: &SpaceParams) -> Result<[f64; 3]> {
    let x = state.x;
    let (s, c) = sc(x, sp);
    if s.abs() < 1e-14 {
        return Err(Error::SingularEval { x, reason: "rotation axis" });
    }
    if sp.is_berger() && c.abs() < 1e-14 {
        return Err(Error::SingularEval { x, reason: "orbit pole" });
    }
    Ok(ode_rhs_raw(&state.ode_state(), h, sp))
}

/// Unchecked right-hand side used by the integrator; produces non-finite
/// values at the chart singularities, which the step control rejects.
fn ode_rhs_raw(st: &State, h: f64, sp: &SpaceParams) -> [f64; 3] {
    let (x, alpha) = (st[0], st[2]);
    let b = sp.bundle_ratio();
    let (s, c) = sc(x, sp);
    let (sa, ca) = alpha.sin_cos();
    let p = tilt_denom_sq(s, c, alpha, sp);
    match sp.kind {
        SpaceKind::BergerSphere => {
            let denom = c * c + b * s * s;
            let curv = 2.0 * h * p * p.sqrt() / sp.tau;
            let tanx = s / c;
            let geo = sa / tanx * ((1.0 - b) * c * c * ca * ca + b * (1.0 - tanx * tanx));
            [ca, sa / c, (curv - geo) / denom]
        }
        SpaceKind::Sl2R => {
            let denom = c * c - b * s * s;
            let curv = 2.0 * h * p * p.sqrt() / sp.tau;
            let th = s / c;
            let geo = sa / th * ((1.0 - b) * ca * ca * c * c + b * (2.0 * ca * ca - 1.0) * (1.0 + th * th));
            [ca, sa / c, (curv - geo) / denom]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// cos(alpha) >= 0
    Plus,
    /// cos(alpha) <= 0
    Minus,
}

/// Reconstructs (sin alpha, cos alpha) on the energy shell at coordinate x.
///
/// The sign of sin(alpha) is forced by the energy identity (it follows the
/// sign of E + H s^2, mirrored on the Sl(2,R) chart where sinh x < 0); the
/// branch argument selects the sign of cos(alpha).
pub fn alpha_from_energy(x: f64, branch: Branch, fp: &FlowParams, sp: &SpaceParams) -> Result<(f64, f64)> {
    let b = sp.bundle_ratio();
    let (s, c) = sc(x, sp);
    let t = s * s;
    let u = fp.e + fp.h * t;
    let (rad, norm) = match sp.kind {
        SpaceKind::BergerSphere => {
            let rad = t * c * c - 4.0 / sp.kappa * u * u;
            let rho = (sp.tau * sp.tau * t + (1.0 - b) * u * u).sqrt();
            (rad, rho)
        }
        SpaceKind::Sl2R => {
            let rad = t * c * c + 4.0 / sp.kappa * u * u;
            let mu = (sp.tau * sp.tau * t + u * u * (1.0 - b * (t - 1.0) / (1.0 + t))).sqrt();
            (rad, mu)
        }
    };
    if rad < -1e-12 * (1.0 + t) {
        return Err(Error::OutsideBand { x });
    }
    let cos_mag = sp.tau * rad.max(0.0).sqrt() / (norm * c.abs());
    let sin_val = match sp.kind {
        SpaceKind::BergerSphere => u * (c * c + b * t).sqrt() / (norm * c),
        SpaceKind::Sl2R => -u * (1.0 - b * (t / (c * c))).sqrt() / norm,
    };
    let sin_val = sin_val.clamp(-1.0, 1.0);
    let cos_val = match branch {
        Branch::Plus => cos_mag,
        Branch::Minus => -cos_mag,
    };
    Ok((sin_val, cos_val))
}

/// The cubic q(t) controlling the sign of alpha' on the energy shell
/// (t = sin^2 x in the Berger sphere, sinh^2 x in Sl(2,R)).
pub fn q_cubic(t: f64, fp: &FlowParams, sp: &SpaceParams) -> f64 {
    let (h, e, k) = (fp.h, fp.e, sp.kappa);
    let d = k - 4.0 * sp.tau * sp.tau;
    let k2 = k * k;
    match sp.kind {
        SpaceKind::BergerSphere => {
            let c3 = h * d * (4.0 * h * h + k) / k2;
            let c2 = d * (12.0 * e * h * h - e * k - 2.0 * h * k) / k2;
            let c1 = 12.0 * h * e * e * d / k2 + 2.0 * e + h;
            let c0 = 4.0 * e * e * e * d / k2 - e;
            ((c3 * t + c2) * t + c1) * t + c0
        }
        SpaceKind::Sl2R => {
            let c3 = -h * (4.0 * h * h + k) * d / k2;
            let c2 = -d * (12.0 * e * h * h - e * k + 2.0 * h * k) / k2;
            let c1 = -12.0 * e * e * h * d / k2 + 2.0 * e - h;
            let c0 = -4.0 * e * e * e * d / k2 + e;
            ((c3 * t + c2) * t + c1) * t + c0
        }
    }
}

/// alpha' on the energy shell, via the cubic reduction.  Valid strictly
/// inside the band and away from the axis; independent of the cos(alpha)
/// branch.
pub fn alpha_prime_reduced(x: f64, fp: &FlowParams, sp: &SpaceParams) -> Result<f64> {
    let b = sp.bundle_ratio();
    let (s, c) = sc(x, sp);
    if s.abs() < 1e-12 {
        return Err(Error::SingularEval { x, reason: "rotation axis" });
    }
    if sp.is_berger() && c.abs() < 1e-12 {
        return Err(Error::SingularEval { x, reason: "orbit pole" });
    }
    let t = s * s;
    let u = fp.e + fp.h * t;
    let tau2 = sp.tau * sp.tau;
    let (norm_sq, denom) = match sp.kind {
        SpaceKind::BergerSphere => (tau2 * t + (1.0 - b) * u * u, (c * c + b * t).sqrt()),
        SpaceKind::Sl2R => (tau2 * t + u * u * (1.0 - b * (t - 1.0) / (1.0 + t)), (c * c - b * t).sqrt()),
    };
    // tau^2 tan(x) q / (cos x sqrt(..) norm^3); cos/cosh > 0 on both charts
    Ok(tau2 * s * q_cubic(t, fp, sp) / (c * c * denom * norm_sq.powf(1.5)))
}

/// Options of [`integrate_profile`].
#[derive(Debug, Clone, Copy)]
pub struct IntegrateOpts {
    pub rtol: f64,
    pub atol: f64,
    /// post-hoc bound on the relative energy drift
    pub energy_tol: f64,
    /// upper bound on the step (and therefore the sample spacing)
    pub max_step: f64,
    /// stop after this many turning points
    pub max_turnings: Option<usize>,
    pub max_samples: usize,
    /// cos x at which the Berger pole tail switches to quadrature
    pub pole_margin: f64,
    /// |x| at which an axis approach is extrapolated and terminated
    pub axis_margin: f64,
}

impl Default for IntegrateOpts {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            energy_tol: 1e-8,
            max_step: 0.05,
            max_turnings: None,
            max_samples: 400_000,
            pole_margin: 1e-4,
            axis_margin: 1e-6,
        }
    }
}

/// Canonical start state of the maximal solution for the given invariants:
/// a turning point of the band (lower edge for unduloids, upper edge for
/// nodoids, the E = -H edge for pole chains), with alpha fixed by the
/// energy sign.
pub fn default_start(fp: &FlowParams, sp: &SpaceParams) -> Result<ProfileState> {
    let band = turning_points(fp, sp)?;
    let sheet = match sp.kind {
        SpaceKind::BergerSphere => 1.0,
        SpaceKind::Sl2R => -1.0,
    };
    // great sphere: any start on the chart with alpha = 0
    if sp.is_berger() && fp.h.abs() <= ENERGY_EQ_TOL && fp.e.abs() <= ENERGY_EQ_TOL {
        return Ok(ProfileState::new(0.0, 0.3, 0.0, 0.0));
    }
    let (x0, t0) = match band {
        TurningBand::Degenerate { t, x } => (x, t),
        TurningBand::TwoSided { t1, t2, x_lo, x_hi } => {
            if sp.is_berger() {
                if fp.e > ENERGY_EQ_TOL || fp.e < -fp.h - ENERGY_EQ_TOL {
                    (x_lo, t1) // unduloid-type: start at the lower edge
                } else if fp.e.abs() <= ENERGY_EQ_TOL {
                    (x_hi, t2) // sphere: start at the equator turning
                } else if (fp.e + fp.h).abs() <= ENERGY_EQ_TOL {
                    (x_lo, t1) // pole chain: start at the inner turning
                } else {
                    (x_hi, t2) // nodoid
                }
            } else if fp.e < -ENERGY_EQ_TOL {
                (x_hi, t1) // Sl2R nodoid: inner turning (sinh^2 = t1)
            } else {
                (x_lo, t2) // Sl2R sphere/unduloid: outer turning (sinh^2 = t2)
            }
        }
        TurningBand::OneSidedUnbounded { t1, x_hi } => {
            if fp.e.abs() <= ENERGY_EQ_TOL {
                // open sphere graph: start next to the axis moving off it
                // (the raw right-hand side is 0/0 on the axis itself)
                return Ok(ProfileState::new(0.0, -1e-6, 0.0, PI));
            }
            (x_hi, t1)
        }
    };
    let u = fp.e + fp.h * t0;
    let sin_sign = sheet * u.signum();
    let alpha0 = if sin_sign >= 0.0 { FRAC_PI_2 } else { 1.5 * PI };
    Ok(ProfileState::new(0.0, x0, 0.0, alpha0))
}

#[derive(Debug, Clone, Copy)]
enum PivotKind {
    Turning,
    Pole,
}

#[derive(Debug, Clone, Copy)]
struct Pivot {
    s: f64,
    y: f64,
    alpha: f64,
    kind: PivotKind,
}

impl Pivot {
    /// The reflection continuation: maps the sample at s (before the pivot)
    /// to the continued sample at 2 s* - s.
    fn apply(&self, st: &ProfileState) -> ProfileState {
        match self.kind {
            PivotKind::Turning => ProfileState::new(
                2.0 * self.s - st.s,
                st.x,
                2.0 * self.y - st.y,
                2.0 * self.alpha - st.alpha,
            ),
            PivotKind::Pole => ProfileState::new(
                2.0 * self.s - st.s,
                st.x,
                2.0 * self.y + PI - st.y,
                2.0 * self.alpha - PI - st.alpha,
            ),
        }
    }
}

struct CurveBuilder {
    samples: Vec<ProfileState>,
    events: Vec<(usize, EventKind)>,
    turnings: usize,
}

impl CurveBuilder {
    fn push(&mut self, st: ProfileState) -> usize {
        self.samples.push(st);
        self.samples.len() - 1
    }

    fn mark(&mut self, idx: usize, kind: EventKind) {
        if kind == EventKind::TurningPoint {
            self.turnings += 1;
        }
        self.events.push((idx, kind));
    }
}

/// Integrates the profile system from `start` over the arc-length `span`.
///
/// Event handling: turning points (cos alpha = 0) are located on the dense
/// output and the curve is continued by the exact reflection rule rather
/// than integrating through; Berger pole approaches (E = -H) finish with an
/// on-shell quadrature tail and restart on the reflected branch; axis
/// touches terminate the curve (the profile of a sphere ends there).
/// Degenerate bands produce the constant-latitude circle analytically.
pub fn integrate_profile(
    start: &ProfileState,
    fp: &FlowParams,
    sp: &SpaceParams,
    span: f64,
    opts: &IntegrateOpts,
) -> Result<ProfileCurve> {
    if span <= 0.0 || (span.is_infinite() && opts.max_turnings.is_none()) {
        return Err(Error::InvalidParams("need a finite span or a turning budget".into()));
    }
    let e0 = energy(start.x, start.alpha, fp.h, sp);
    let de = (e0 - fp.e).abs() / (1.0 + fp.e.abs());
    if de > 1e-10 {
        return Err(Error::InconsistentStart { de });
    }
    let band = turning_points(fp, sp)?;
    if let TurningBand::Degenerate { x, .. } = band {
        return Ok(degenerate_circle(start, x, sp, span, opts));
    }

    let s_end = start.s + span;
    let pole_armed = sp.is_berger() && (fp.e + fp.h).abs() <= ENERGY_EQ_TOL && fp.h > ENERGY_EQ_TOL;
    let great_sphere = sp.is_berger() && fp.h.abs() <= ENERGY_EQ_TOL && fp.e.abs() <= ENERGY_EQ_TOL;
    let axis_armed = fp.e.abs() <= ENERGY_EQ_TOL;

    let mut builder = CurveBuilder { samples: Vec::new(), events: Vec::new(), turnings: 0 };
    builder.push(*start);

    let rhs = |_s: f64, y: &State| ode_rhs_raw(y, fp.h, sp);
    let ode_opts = OdeOpts { rtol: opts.rtol, atol: opts.atol, h_max: opts.max_step, max_steps: 4_000_000 };

    let turning_budget_left =
        |b: &CurveBuilder| opts.max_turnings.map(|m| b.turnings < m).unwrap_or(true);

    let mut resume = Some(*start);
    'phases: while let Some(phase_start) = resume.take() {
        if phase_start.s >= s_end || !turning_budget_left(&builder) {
            break;
        }
        let mut solver = Dopri5::new(rhs, phase_start.s, phase_start.ode_state(), ode_opts);
        let dead_zone = phase_start.s + 1e-7;

        let pivot = 'raw: loop {
            if builder.samples.len() > opts.max_samples {
                return Err(Error::InvalidParams("sample budget exceeded".into()));
            }
            let step = match solver.step(s_end) {
                Ok(st) => st,
                Err(Error::InvalidParams(_)) => break 'phases, // span exhausted
                Err(e) => return Err(e),
            };

            // event functions at both ends of the accepted step
            let g_turn = |y: &State| y[2].cos();
            let g_pole = |y: &State| y[0].cos() - opts.pole_margin;
            let g_axis = |y: &State| y[0].abs() - opts.axis_margin;

            let mut hit: Option<(f64, EventKind)> = None;
            let mut consider = |s_ev: Option<f64>, kind: EventKind| {
                if let Some(sv) = s_ev {
                    if sv > dead_zone && hit.map(|(cur, _)| sv < cur).unwrap_or(true) {
                        hit = Some((sv, kind));
                    }
                }
            };
            consider(locate(&step, g_turn), EventKind::TurningPoint);
            if pole_armed || great_sphere {
                consider(locate(&step, g_pole), EventKind::PoleTouch);
            }
            if axis_armed {
                consider(locate(&step, g_axis), EventKind::AxisTouch);
            }

            match hit {
                None => {
                    let st = ProfileState::from_ode(step.s1, &step.y1);
                    builder.push(st);
                    if step.s1 >= s_end - 1e-13 {
                        break 'phases;
                    }
                }
                Some((s_ev, kind)) => {
                    // land on the event with a full-accuracy sub-step
                    let y_ev = single_step(&rhs, step.s0, &step.y0, s_ev);
                    let st_ev = ProfileState::from_ode(s_ev, &y_ev);
                    match kind {
                        EventKind::TurningPoint => {
                            let snapped = snap_turning(&st_ev, &band);
                            let idx = builder.push(snapped);
                            builder.mark(idx, EventKind::TurningPoint);
                            break 'raw Pivot {
                                s: snapped.s,
                                y: snapped.y,
                                alpha: snapped.alpha,
                                kind: PivotKind::Turning,
                            };
                        }
                        EventKind::PoleTouch => {
                            let pole = pole_tail(&st_ev, fp, sp)?;
                            let idx = builder.push(pole);
                            builder.mark(idx, EventKind::PoleTouch);
                            break 'raw Pivot {
                                s: pole.s,
                                y: pole.y,
                                alpha: pole.alpha,
                                kind: PivotKind::Pole,
                            };
                        }
                        EventKind::AxisTouch => {
                            let axis = axis_tail(&st_ev, sp);
                            let idx = builder.push(axis);
                            builder.mark(idx, EventKind::AxisTouch);
                            break 'phases; // profile terminates on the axis
                        }
                        EventKind::Reflection => unreachable!(),
                    }
                }
            }
        };

        // continuation by reflection: mirror the whole emitted history
        let pivot_idx = builder.samples.len() - 1;
        builder.mark(pivot_idx, EventKind::Reflection);
        let mut pivot = pivot;
        loop {
            let marks: std::collections::HashMap<usize, Vec<EventKind>> = {
                let mut m: std::collections::HashMap<usize, Vec<EventKind>> = Default::default();
                for (i, k) in &builder.events {
                    if matches!(k, EventKind::TurningPoint | EventKind::PoleTouch) {
                        m.entry(*i).or_default().push(*k);
                    }
                }
                m
            };
            let hist_top = builder.samples.len() - 1;
            let mut landed: Option<ProfileState> = None;
            for i in (0..hist_top).rev() {
                let mirrored = pivot.apply(&builder.samples[i]);
                if mirrored.s > s_end + 1e-13 {
                    break 'phases; // truncate at the requested span
                }
                let idx = builder.push(mirrored);
                if let Some(kinds) = marks.get(&i) {
                    for k in kinds {
                        builder.mark(idx, *k);
                        if !turning_budget_left(&builder) {
                            break 'phases;
                        }
                    }
                }
                if builder.samples.len() > opts.max_samples {
                    return Err(Error::InvalidParams("sample budget exceeded".into()));
                }
                if i == 0 {
                    landed = Some(mirrored);
                }
            }
            let Some(landing) = landed else { break 'phases };
            if landing.s >= s_end - 1e-13 {
                break 'phases;
            }
            if landing.alpha.cos().abs() <= 1e-9 {
                // the start itself was a turning point: pivot again and let the
                // mirrored stretch double
                let idx = builder.samples.len() - 1;
                builder.mark(idx, EventKind::TurningPoint);
                if !turning_budget_left(&builder) {
                    break 'phases;
                }
                builder.mark(idx, EventKind::Reflection);
                pivot = Pivot { s: landing.s, y: landing.y, alpha: landing.alpha, kind: PivotKind::Turning };
                continue;
            }
            resume = Some(landing);
            break;
        }
    }

    let curve = ProfileCurve { samples: builder.samples, events: builder.events };
    let drift = curve.energy_drift(fp, sp);
    if drift > opts.energy_tol {
        return Err(Error::EnergyDrift { drift, tol: opts.energy_tol });
    }
    Ok(curve)
}

/// Bisects a sign change of `g` on the dense output of one accepted step.
fn locate<G: Fn(&State) -> f64>(step: &crate::numerics::rk::DenseStep, g: G) -> Option<f64> {
    let (mut lo, mut hi) = (step.s0, step.s1);
    let g0 = g(&step.y0);
    let g1 = g(&step.y1);
    if g0 == 0.0 {
        return None; // exactly at a node; handled by the dead zone logic
    }
    if g0 * g1 > 0.0 {
        return None;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(&step.eval(mid)) * g0 <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 * (1.0 + hi.abs()) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Snaps a located turning state onto the exact band edge and alpha grid,
/// removing the residual sign ambiguity of the event location.
fn snap_turning(st: &ProfileState, band: &TurningBand) -> ProfileState {
    let alpha = (st.alpha / PI - 0.5).round() * PI + FRAC_PI_2;
    let x = match band {
        TurningBand::TwoSided { x_lo, x_hi, .. } => {
            if (st.x - x_lo).abs() < (st.x - x_hi).abs() {
                *x_lo
            } else {
                *x_hi
            }
        }
        TurningBand::OneSidedUnbounded { x_hi, .. } => *x_hi,
        TurningBand::Degenerate { x, .. } => *x,
    };
    ProfileState::new(st.s, x, st.y, alpha)
}

/// Finishes a Berger pole approach (E = -H) from the event state at
/// cos x = pole_margin to the pole itself with on-shell quadrature of
/// dy/dx and ds/dx, both regular at the pole in reduced form.
fn pole_tail(st: &ProfileState, fp: &FlowParams, sp: &SpaceParams) -> Result<ProfileState> {
    let (h, k, tau) = (fp.h, sp.kappa, sp.tau);
    let b = sp.bundle_ratio();
    let spec = QuadratureSpec::with_tol(1e-13);
    let x_ev = st.x;
    let (dy, ds);
    if h.abs() <= ENERGY_EQ_TOL {
        // great-sphere crossing: y frozen, unit speed in x
        dy = 0.0;
        ds = FRAC_PI_2 - x_ev;
    } else {
        dy = integrate_endpoint_singular(
            |x| {
                let (s, c) = x.sin_cos();
                let rad = s * s - 4.0 / k * h * h * c * c;
                -h * (c * c + b * s * s).sqrt() / (tau * rad.max(0.0).sqrt())
            },
            x_ev,
            FRAC_PI_2,
            &spec,
        )?;
        ds = integrate_endpoint_singular(
            |x| {
                let (s, c) = x.sin_cos();
                let rad = s * s - 4.0 / k * h * h * c * c;
                let rho = (tau * tau * s * s + (1.0 - b) * h * h * c * c * c * c).sqrt();
                rho / (tau * rad.max(0.0).sqrt())
            },
            x_ev,
            FRAC_PI_2,
            &spec,
        )?;
    }
    // incoming branch has cos(alpha) -> +1, sin(alpha) -> 0^-
    let alpha = (st.alpha / (2.0 * PI)).round() * 2.0 * PI;
    Ok(ProfileState::new(st.s + ds, FRAC_PI_2, st.y + dy, alpha))
}

/// Extrapolates an axis approach onto the axis and snaps alpha to the
/// orthogonal-crossing grid; the margin is small enough that the linear
/// extrapolation error is below the integration tolerance.
fn axis_tail(st: &ProfileState, sp: &SpaceParams) -> ProfileState {
    let ca = st.alpha.cos();
    let ds = if ca.abs() > 0.5 { -st.x / ca } else { 0.0 };
    let (_, c) = sc(st.x, sp);
    let dy = st.alpha.sin() / c * ds;
    let alpha = (st.alpha / PI).round() * PI;
    ProfileState::new(st.s + ds, 0.0, st.y + dy, alpha)
}

/// The constant-latitude circle of a degenerate band, sampled uniformly.
fn degenerate_circle(
    start: &ProfileState,
    x_band: f64,
    sp: &SpaceParams,
    span: f64,
    opts: &IntegrateOpts,
) -> ProfileCurve {
    let (_, c) = sc(x_band, sp);
    let dy_ds = start.alpha.sin().signum() / c;
    let n = ((span / opts.max_step).ceil() as usize).clamp(2, opts.max_samples);
    let samples = (0..=n)
        .map(|i| {
            let ds = span * i as f64 / n as f64;
            ProfileState::new(start.s + ds, x_band, start.y + dy_ds * ds, start.alpha)
        })
        .collect();
    ProfileCurve { samples, events: Vec::new() }
}
