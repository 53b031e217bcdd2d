use thiserror::Error;

/// Errors raised by the element, transform and assembly routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular matrix: pivot {pivot:.3e} at column {column}")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("matrix is not symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("iterative solver did not converge in {iterations} iterations (residual {residual:.3e})")]
    MaxIterations { iterations: usize, residual: f64 },
    #[error("degenerate triangle (twice-area {0:.3e})")]
    DegenerateTriangle(f64),
    #[error("generalized Vandermonde matrix is singular: node set is not unisolvent")]
    SingularVandermonde,
    #[error("affine map has a singular Jacobian")]
    SingularJacobian,
    #[error("node/basis pairing matrix is singular")]
    SingularB,
    #[error("quadrature degree {0} is not supported")]
    UnsupportedDegree(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
