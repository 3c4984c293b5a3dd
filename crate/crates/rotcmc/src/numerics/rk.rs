//! Dormand-Prince 5(4) integrator with dense output, specialised to the
//! three-dimensional profile systems.
//!
//! Step control is the usual error-per-step scheme with a PI-like limiter;
//! event localisation is done by the caller on the dense output and the
//! event state is then recomputed with a single controlled step, so event
//! states carry full integration accuracy rather than interpolation
//! accuracy.

use crate::error::{Error, Result};

pub type State = [f64; 3];

#[derive(Debug, Clone, Copy)]
pub struct OdeOpts {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOpts {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_max: 0.1, max_steps: 2_000_000 }
    }
}

/// One accepted step with its quartic interpolant.
#[derive(Debug, Clone)]
pub struct DenseStep {
    pub s0: f64,
    pub s1: f64,
    pub y0: State,
    pub y1: State,
    cont: [State; 5],
}

impl DenseStep {
    pub fn h(&self) -> f64 {
        self.s1 - self.s0
    }

    /// Evaluates the dense output at `s` in [s0, s1].
    pub fn eval(&self, s: f64) -> State {
        let th = (s - self.s0) / (self.s1 - self.s0);
        let th1 = 1.0 - th;
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.cont[0][i]
                + th * (self.cont[1][i]
                    + th1 * (self.cont[2][i] + th * (self.cont[3][i] + th1 * self.cont[4][i])));
        }
        out
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One Dormand-Prince step of size h from (s0, y0); returns (y1, error
/// estimate, stages).  `k1` may be supplied (FSAL).
fn dp_step<F: Fn(f64, &State) -> State>(
    f: &F,
    s0: f64,
    y0: &State,
    h: f64,
    k1: Option<State>,
) -> (State, State, [State; 7]) {
    let mut k = [[0.0; 3]; 7];
    k[0] = k1.unwrap_or_else(|| f(s0, y0));
    for stage in 1..7 {
        let mut ys = *y0;
        for i in 0..3 {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(stage) {
                acc += A[stage][j] * kj[i];
            }
            ys[i] += h * acc;
        }
        k[stage] = f(s0 + C[stage] * h, &ys);
    }
    // k[6] is f(s1, y1) because the last A row equals b (FSAL)
    let mut y1 = *y0;
    for i in 0..3 {
        let mut acc = 0.0;
        for (j, kj) in k.iter().enumerate().take(6) {
            acc += A[6][j] * kj[i];
        }
        y1[i] += h * acc;
    }
    let mut err = [0.0; 3];
    for i in 0..3 {
        let mut acc = 0.0;
        for (j, kj) in k.iter().enumerate() {
            acc += E[j] * kj[i];
        }
        err[i] = h * acc;
    }
    (y1, err, k)
}

pub struct Dopri5<F: Fn(f64, &State) -> State> {
    f: F,
    pub s: f64,
    pub y: State,
    h: f64,
    k_last: Option<State>,
    steps: usize,
    opts: OdeOpts,
}

impl<F: Fn(f64, &State) -> State> Dopri5<F> {
    pub fn new(f: F, s0: f64, y0: State, opts: OdeOpts) -> Self {
        let h = (opts.h_max * 1e-3).min(1e-4);
        Self { f, s: s0, y: y0, h, k_last: None, steps: 0, opts }
    }

    /// Advances by one accepted step, never beyond `s_limit`.
    pub fn step(&mut self, s_limit: f64) -> Result<DenseStep> {
        let mut h = self.h.min(self.opts.h_max);
        loop {
            self.steps += 1;
            if self.steps > self.opts.max_steps || h < 1e-15 * (1.0 + self.s.abs()) {
                return Err(Error::StepSizeCollapse { s: self.s, x: self.y[0], alpha: self.y[2] });
            }
            let clamped = h.min(s_limit - self.s);
            if clamped <= 0.0 {
                return Err(Error::InvalidParams("integration span exhausted".into()));
            }
            let (y1, err, k) = dp_step(&self.f, self.s, &self.y, clamped, self.k_last);
            let mut norm = 0.0;
            for i in 0..3 {
                let sc = self.opts.atol + self.opts.rtol * self.y[i].abs().max(y1[i].abs());
                norm += (err[i] / sc) * (err[i] / sc);
            }
            let norm = (norm / 3.0).sqrt();
            if !norm.is_finite() {
                h *= 0.25;
                self.k_last = None;
                continue;
            }
            if norm <= 1.0 {
                // accept
                let mut cont = [[0.0; 3]; 5];
                for i in 0..3 {
                    let dy = y1[i] - self.y[i];
                    let bspl = clamped * k[0][i] - dy;
                    cont[0][i] = self.y[i];
                    cont[1][i] = dy;
                    cont[2][i] = bspl;
                    cont[3][i] = dy - clamped * k[6][i] - bspl;
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate() {
                        acc += D[j] * kj[i];
                    }
                    cont[4][i] = clamped * acc;
                }
                let step = DenseStep { s0: self.s, s1: self.s + clamped, y0: self.y, y1, cont };
                self.s = step.s1;
                self.y = y1;
                self.k_last = Some(k[6]);
                let fac = (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0);
                self.h = (clamped * fac).min(self.opts.h_max);
                return Ok(step);
            }
            // reject
            let fac = (0.9 * norm.powf(-0.2)).clamp(0.1, 0.9);
            h = clamped * fac;
            self.k_last = None;
        }
    }

    /// Restarts the integrator at a new state (after an event).
    pub fn restart(&mut self, s: f64, y: State) {
        self.s = s;
        self.y = y;
        self.k_last = None;
    }

    /// One uncontrolled step of exactly `h` from the current state, used to
    /// land on located events with full-order accuracy.
    pub fn land_on(&self, h: f64) -> State {
        dp_step(&self.f, self.s, &self.y, h, self.k_last).0
    }
}

/// Takes a single controlled sub-step from (s0, y0) to exactly s1 (assumed
/// within the last accepted step, so the error is below the step tolerance).
pub fn single_step<F: Fn(f64, &State) -> State>(f: &F, s0: f64, y0: &State, s1: f64) -> State {
    if s1 == s0 {
        return *y0;
    }
    dp_step(f, s0, y0, s1 - s0, None).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrates_circular_motion() {
        // y'' = -y as a first-order system plus a trivial third component
        let f = |_s: f64, y: &State| [y[1], -y[0], 0.0];
        let mut solver = Dopri5::new(f, 0.0, [1.0, 0.0, 0.5], OdeOpts::default());
        while solver.s < 10.0 - 1e-12 {
            solver.step(10.0).unwrap();
        }
        assert_abs_diff_eq!(solver.y[0], 10.0_f64.cos(), epsilon = 1e-8);
        assert_abs_diff_eq!(solver.y[1], -10.0_f64.sin(), epsilon = 1e-8);
        assert_abs_diff_eq!(solver.y[2], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn dense_output_matches_solution_inside_step() {
        let f = |s: f64, _y: &State| [s.cos(), 0.0, 0.0];
        let mut solver = Dopri5::new(f, 0.0, [0.0, 0.0, 0.0], OdeOpts { h_max: 0.5, ..Default::default() });
        let step = solver.step(0.5).unwrap();
        for k in 0..=10 {
            let s = step.s0 + (step.s1 - step.s0) * k as f64 / 10.0;
            assert_abs_diff_eq!(step.eval(s)[0], s.sin(), epsilon = 1e-9);
        }
    }

    #[test]
    fn stiff_blowup_reports_collapse() {
        // derivative becomes NaN at x = 1; step size must collapse there
        let f = |_s: f64, y: &State| [1.0 / (1.0 - y[0]).sqrt(), 0.0, 0.0];
        let mut solver = Dopri5::new(f, 0.0, [0.0, 0.0, 0.0], OdeOpts::default());
        let mut result = Ok(());
        for _ in 0..100_000 {
            match solver.step(10.0) {
                Ok(_) => {
                    if solver.s >= 10.0 {
                        break;
                    }
                }
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        assert!(matches!(result, Err(Error::StepSizeCollapse { .. })));
    }
}
