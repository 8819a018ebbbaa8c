use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the zero polynomial is not a valid input")]
    ZeroPolynomial,

    #[error("leading coefficient a_{degree} is zero; trim the coefficient list or lower the degree")]
    ZeroLeadingCoefficient { degree: usize },

    #[error("degree {degree} exceeds the configured cap of {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },

    #[error("coefficient a_{index} is not finite")]
    NonFiniteCoefficient { index: usize },

    #[error("root {root} is not a root of the polynomial (relative remainder {remainder:e})")]
    InconsistentRoots { root: String, remainder: f64 },

    #[error("root finder did not converge; use mahler_quadrature for this polynomial")]
    RootsNotConverged,

    #[error("right-hand side constant vanishes for these parameters (degenerate rhs)")]
    DegenerateRhs,

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}
