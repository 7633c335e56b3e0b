use crate::{CMatrix, C64};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular system (rcond = {rcond:.3e})")]
    Singular { rcond: f64 },

    #[error("evaluation at {z} which lies in a declared singular set")]
    Domain { z: C64 },

    #[error("contour error: {0}")]
    Contour(String),

    #[error("eigenvalue {eigenvalue} lies within {distance:.3e} of the contour")]
    Separation { eigenvalue: C64, distance: f64 },

    #[error("quadrature failed to converge after {nodes} nodes (last change {difference:.3e})")]
    Quadrature {
        nodes: usize,
        difference: f64,
        previous: Box<CMatrix>,
        last: Box<CMatrix>,
    },

    #[error("trace {raw} is not within tolerance of an integer (residual {residual:.3e})")]
    NonInteger { raw: C64, residual: f64 },

    #[error("operator orderings disagree: {first} vs {second}")]
    OrderingMismatch { first: C64, second: C64 },

    #[error("A(z0) is invertible at z0 = {z0}; there is no zero to factor")]
    NoZero { z0: C64 },

    #[error("Laurent coefficient of order -{probe} is still nonzero (norm {norm:.3e})")]
    OrderExceedsProbe { probe: usize, norm: f64 },

    #[error("regular part still singular after {steps} Howland steps; zero is not of finite type")]
    NotFiniteType { steps: usize },

    #[error("function vanishes identically near {z0}")]
    Degenerate { z0: C64 },

    #[error("I - K(z) is singular at z = {z} (rcond = {rcond:.3e})")]
    BirmanSchwingerSingular { z: C64, rcond: f64 },
}

impl Error {
    /// Errors caused by what the caller passed in, as opposed to numerical
    /// breakdown during a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::Dimension(_) | Error::Domain { .. } | Error::NoZero { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Dimension(_) => "dimension",
            Error::Singular { .. } => "singular_system",
            Error::Domain { .. } => "domain",
            Error::Contour(_) => "contour",
            Error::Separation { .. } => "separation",
            Error::Quadrature { .. } => "quadrature",
            Error::NonInteger { .. } => "non_integer",
            Error::OrderingMismatch { .. } => "ordering_mismatch",
            Error::NoZero { .. } => "no_zero",
            Error::OrderExceedsProbe { .. } => "order_exceeds_probe",
            Error::NotFiniteType { .. } => "not_finite_type",
            Error::Degenerate { .. } => "degenerate",
            Error::BirmanSchwingerSingular { .. } => "birman_schwinger_singular",
        }
    }
}
