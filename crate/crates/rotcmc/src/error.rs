use thiserror::Error;

/// Library-wide error type.
///
/// The variants are grouped by how the CLI maps them to exit codes:
/// invalid parameters (2), numerical failures (3), geometric
/// precondition failures (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("({h}, {e}) is outside the admissible energy range")]
    InadmissibleEnergy { h: f64, e: f64 },

    #[error("coordinate {x} is outside the admissible band")]
    OutsideBand { x: f64 },

    #[error("vector is not tangent to the quadric (residual {residual:.3e})")]
    NonTangent { residual: f64 },

    #[error("singular evaluation at x = {x} ({reason})")]
    SingularEval { x: f64, reason: &'static str },

    #[error("period is undefined for a degenerate turning band")]
    DegenerateBand,

    #[error("period requires a two-sided turning band")]
    UnboundedBand,

    #[error("no constant mean curvature sphere exists for these parameters (4H^2 + kappa <= 0)")]
    NoSphere,

    #[error("operation is only defined in the Berger sphere")]
    BergerOnly,

    #[error("quadrature did not converge after {levels} levels (last error {last_err:.3e})")]
    QuadratureNoConverge { levels: u32, last_err: f64 },

    #[error("root bracket is invalid: f({lo}) and f({hi}) do not change sign")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("predicate does not change over the bracket [{lo}, {hi}]")]
    BracketError { lo: f64, hi: f64 },

    #[error("step size collapsed near s = {s} (x = {x}, alpha = {alpha})")]
    StepSizeCollapse { s: f64, x: f64, alpha: f64 },

    #[error("start state is inconsistent with the prescribed energy (|dE| = {de:.3e})")]
    InconsistentStart { de: f64 },

    #[error("energy drift {drift:.3e} exceeds tolerance {tol:.3e}")]
    EnergyDrift { drift: f64, tol: f64 },

    #[error("degenerate surface sample at (s, t) = ({s}, {t})")]
    DegenerateSample { s: f64, t: f64 },

    #[error("stereographic pole lies on the surface (distance {dist:.3e})")]
    PoleOnSurface { dist: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            InvalidParams(_) | InadmissibleEnergy { .. } | NoSphere | BergerOnly => 2,
            QuadratureNoConverge { .. }
            | InvalidBracket { .. }
            | BracketError { .. }
            | StepSizeCollapse { .. }
            | InconsistentStart { .. }
            | EnergyDrift { .. } => 3,
            OutsideBand { .. }
            | NonTangent { .. }
            | SingularEval { .. }
            | DegenerateBand
            | UnboundedBand
            | DegenerateSample { .. }
            | PoleOnSurface { .. } => 4,
            Io(_) => 3,
        }
    }
}
