//! Rotationally invariant constant mean curvature surfaces in the Berger
//! spheres and in Sl(2,R).
//!
//! The crate computes the generating-curve dynamics (profile ODEs with their
//! energy first integral), the full classification of the resulting
//! surfaces (spheres, Clifford tori, unduloid- and nodoid-type Delaunay
//! surfaces, pole chains and the open Sl(2,R) graphs), singular period
//! integrals with rationality witnesses for compactness, closed-form sphere
//! and torus geometry (area, enclosed volume, embeddedness), independent
//! numerical oracles for mean curvature and area, and the headline scans:
//! minimal-unduloid period roots (embedded non-Clifford minimal tori),
//! the transition value of tau where those roots disappear, embeddedness
//! regions of CMC spheres, and the sphere-versus-torus isoperimetric
//! comparison.

pub mod classify;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod investigate;
pub mod mesh;
pub mod numerics;
pub mod oracle;
pub mod profile;
pub mod report;
pub mod space;

pub use classify::{
    admissible, admissible_energy_range, classify, compactness_test, period, period_signed,
    turning_points, ClassifyOpts, EnergyRange, FlowParams, RationalWitness, SurfaceClass,
    TurningBand,
};
pub use error::{Error, Result};
pub use profile::{
    alpha_from_energy, alpha_prime_reduced, default_start, energy, integrate_profile, ode_rhs,
    q_cubic, tilt_c, Branch, EventKind, IntegrateOpts, ProfileCurve, ProfileState,
};
pub use space::{SpaceKind, SpaceParams};
