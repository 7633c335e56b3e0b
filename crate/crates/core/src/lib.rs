//! Numerical toolkit for matrix-valued analytic and finitely meromorphic
//! functions.
//!
//! The crate works at finite dimension throughout: operators are dense
//! complex matrices, operator-valued functions are evaluable maps
//! `z -> CMatrix`, and every contour integral is a trapezoidal rule on a
//! circle. On top of that sit
//!
//! * Howland factorizations `A(z) = [Q_1 - (z-z_0)P_1] ... A_{n_0}(z)` and
//!   their reversed-order counterparts ([`factorization`]),
//! * Riesz projections and the operator argument principle
//!   ([`contour`], [`multiplicity`]),
//! * Birman-Schwinger multiplicity identities and the Weinstein-Aronszajn
//!   index for perturbations `H = H_0 + V_2^* V_1` ([`birman_schwinger`]),
//! * index, trace and spectral-shift identities for pairs of orthogonal
//!   projections ([`projection_pairs`]).
//!
//! Quadrature nodes are evaluated in parallel when the `parallel` feature is
//! enabled (the default); sums are always accumulated in node order, so
//! results are bit-identical with and without the feature.

pub mod analytic;
pub mod birman_schwinger;
pub mod contour;
mod error;
pub mod factorization;
pub mod generate;
pub mod linalg;
pub mod multiplicity;
pub mod parallel;
pub mod projection_pairs;

pub use analytic::{LaurentExpansion, OperatorFunction, PrincipalPart};
pub use birman_schwinger::{BSVerdict, PerturbationProblem};
pub use contour::{Circle, QuadratureConfig};
pub use error::{Error, Result};
pub use factorization::{HowlandFactorization, HowlandStep};
pub use linalg::{CMatrix, Projector, SubspaceBasis};
pub use multiplicity::{Method, MultiplicityReport};
pub use projection_pairs::{PairIndexReport, ProjectionPair};

/// Double-precision complex scalar used everywhere in the crate.
pub type C64 = num_complex::Complex64;

/// Default relative rank threshold: singular values `<= RTOL * sigma_max`
/// are treated as zero.
pub const DEFAULT_RTOL: f64 = 1e-10;

/// A rounded trace is accepted as an integer only within this distance.
pub const INTEGER_TOL: f64 = 1e-6;
