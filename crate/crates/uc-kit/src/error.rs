use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite input")]
    NonFinite,
    #[error("ambiguous LMO: the zero direction selects the whole body")]
    AmbiguousLmo,
    #[error("support not differentiable everywhere: {0} is not strictly convex")]
    NotDifferentiable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point is not on the boundary: gauge {gauge} (tolerance {tol})")]
    NotOnBoundary { gauge: f64, tol: f64 },
    #[error("invalid anchor: {0}")]
    InvalidAnchor(String),
    #[error("body is not uniformly convex: {0}")]
    NotUniformlyConvex(String),
    #[error("no direct clause for {from} -> {to}; compose explicitly")]
    NoDirectClause { from: String, to: String },
    #[error("too few points: need at least {need}, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("objective rejected: {0}")]
    ObjectiveRejected(String),
    #[error("numerical abort: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by arithmetic rather than by invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::NonFinite)
    }
}
