use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DepthError {
    #[error("vector has zero norm")]
    ZeroNorm,
    #[error("dimension {0} is too small, need at least 2")]
    DimensionTooSmall(usize),
    #[error("vector norm {0} is not within 1e-8 of one")]
    NotUnit(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("sample is empty")]
    EmptySample,
    #[error("sample has {found} points, need at least {needed}")]
    SampleTooSmall { needed: usize, found: usize },
    #[error("operation requires circular data (dimension 2), got dimension {0}")]
    NotCircle(usize),
    #[error("mean resultant vector is zero; spherical mean undefined")]
    NullResultant,
    #[error("depth is constant on the sphere; every point is deepest")]
    ConstantDepth,
    #[error("quadrature did not converge by order {order}")]
    QuadratureFailure { order: usize },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("matrix is not orthogonal (max deviation {0:e})")]
    NotOrthogonal(f64),
}

pub type Result<T, E = DepthError> = std::result::Result<T, E>;
