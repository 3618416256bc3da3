//! Geodesics in the SOL geometry.
//!
//! SOL is the solvable Lie group `R^2 ⋊ R` with the left-invariant metric
//! `e^{-2z} dx^2 + e^{2z} dy^2 + dz^2`, one of Thurston's eight model
//! geometries. Its geodesic flow is completely integrable: every unit-speed
//! geodesic carries constants of motion `(a, b, c)` and a modulus
//! `k ∈ [0, 1]` that classifies it up to isometry. This crate implements:
//!
//! - the group, its isometries, and the oscillator potential ([`geometry`]);
//! - complete elliptic integrals `K`, `E` via the AGM ([`elliptic`]);
//! - the invariants `A(k)`, `T(k)`, `M(k)`, `H(k)`, their derivatives and
//!   inverses ([`invariants`]);
//! - geodesic construction, classification, adaptive integration of the
//!   flow, Grayson cylinders and their framing fields ([`flow`]);
//! - partner geodesics, the one-period winding law, and Jacobi-field
//!   checks at critical times ([`rendezvous`]);
//! - exact special-case distances, cut lengths, two-point distances by
//!   multi-start shooting, and the ground-plane asymptotics ([`distance`]);
//! - closed-form geodesics of the Heisenberg (NIL) geometry ([`nil`]);
//! - deterministic CSV/JSON export of trajectories ([`emit`]).
//!
//! All quantities are `f64`; tolerances are explicit per operation.

pub mod distance;
pub mod elliptic;
pub mod emit;
pub mod flow;
pub mod geometry;
pub mod invariants;
pub mod nil;
pub mod ode;
pub mod rendezvous;
mod rootfind;

pub use distance::{DistanceMethod, DistanceResult};
pub use flow::{GeodesicClass, GeodesicSpec, GraysonCylinder, MotionConstants, Trajectory};
pub use geometry::{Isometry, Point, TangentVec};
pub use invariants::{InvariantSet, ModulusDict};

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The unit-speed admissibility bound `2|ab| <= 1` is violated.
    #[error("admissibility error: 2|ab| = {two_ab} exceeds 1")]
    Admissibility { two_ab: f64 },

    /// Two points were expected at the same altitude.
    #[error("altitude mismatch: z1 = {z1}, z2 = {z2}")]
    AltitudeMismatch { z1: f64, z2: f64 },

    /// A velocity was expected to have unit norm; callers must normalize.
    #[error("non-unit speed: |v| = {norm}")]
    NonUnitSpeed { norm: f64 },

    /// The operation requires a geodesic of a different class.
    #[error("class error: operation requires a generic geodesic, got {class}")]
    WrongClass { class: flow::GeodesicClass },

    /// An inversion target below the range infimum of the function.
    #[error("range error: target {target} below infimum {infimum}")]
    BelowRange { target: f64, infimum: f64 },

    /// `λ` below the admissibility threshold `λ*(θ)` of the ground-plane
    /// asymptotic construction.
    #[error("admissibility error: λ = {lambda} below λ*(θ) = {lambda_star}")]
    BelowLambdaStar { lambda: f64, lambda_star: f64 },

    /// The integrator could not meet the requested tolerance budget.
    #[error("integration failure: worst residual {worst_residual}")]
    IntegrationFailure { worst_residual: f64 },

    /// The shooting solver found no verified witness.
    #[error("solver failure: best endpoint miss {best_miss}")]
    SolverFailure { best_miss: f64 },

    /// A point expected on a Grayson cylinder is not on it.
    #[error("precondition error: point off cylinder, residual {residual}")]
    OffCylinder { residual: f64 },

    /// A time expected to be critical (`ż = 0`) is not.
    #[error("precondition error: t1 = {t1} is not critical, zdot = {zdot}")]
    NotCritical { t1: f64, zdot: f64 },

    /// A bracketed search ran out of room.
    #[error("search failure: {0}")]
    SearchFailure(String),

    /// Failure writing to an output sink.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
