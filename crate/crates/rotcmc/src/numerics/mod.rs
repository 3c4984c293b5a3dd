//! Shared numerical machinery: endpoint-singular quadrature, bracketed root
//! finding, continued-fraction rational approximation, and the adaptive
//! Runge-Kutta stepper used by the profile integrator.

pub mod quad;
pub mod rational;
pub mod rk;
pub mod root;

pub use quad::{gauss_legendre, integrate_endpoint_singular, QuadMethod, QuadratureSpec};
pub use rational::rational_approx;
pub use rk::{Dopri5, DenseStep, OdeOpts, State};
pub use root::{find_root, scan_bracket, RootBracket};
