use thiserror::Error;

/// Errors raised by the algebra, kernel and quadrature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}; expected 2, 4 or 8")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite coefficient at index {0}")]
    NonFiniteCoefficient(usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("singular point {0:?}")]
    SingularPoint(Vec<f64>),

    #[error("point {0:?} lies outside the half space")]
    OutsideHalfSpace(Vec<f64>),

    #[error("point {0:?} lies outside the ball")]
    OutsideBall(Vec<f64>),

    #[error("point {0:?} lies outside the function domain (or too close to its boundary)")]
    OutsideDomain(Vec<f64>),

    #[error("point {0:?} lies on the integration sphere")]
    OnBoundary(Vec<f64>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite integrand value at {0:?}")]
    NonFiniteSample(Vec<f64>),
}

pub type Result<T> = std::result::Result<T, Error>;
