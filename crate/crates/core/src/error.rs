use thiserror::Error;

/// Errors raised by the library. Law violations are never errors; they land
/// in a [`crate::harness::LawReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not an effect: {0}")]
    NotEffect(String),
    #[error("matrix is not a projection (deviation {0:e})")]
    NotProjection(f64),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("kernel supplements are not pairwise orthogonal")]
    NotOrthogonal,
    #[error("predicates do not form a test")]
    NotATest,
    #[error("map is not total")]
    NotTotal,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("suite `{suite}` does not apply to the {instance} instance")]
    NotApplicable { suite: String, instance: String },
    #[error("duplicate suite registration `{0}`")]
    DuplicateSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
