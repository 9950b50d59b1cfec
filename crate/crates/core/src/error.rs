use thiserror::Error;

/// Errors raised by the computational core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composite of consecutive differentials is nonzero")]
    CompositionNonzero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("window violation: {0}")]
    WindowViolation(String),
    #[error("inconsistent grading: {0}")]
    InconsistentGrading(String),
    #[error("not contained: {0}")]
    NotContained(String),
    #[error("differential does not square to zero: {0}")]
    SignError(String),
    #[error("window too short: generator extraction unreliable from degree {degree}")]
    WindowTooShort { degree: i64 },
    #[error("structure is not an action: {0}")]
    NotAnAction(String),
    #[error("subspace is not a submodule: {0}")]
    NotASubmodule(String),
    #[error("tangent cohomology changes when the window widens: {0}")]
    WindowUnstable(String),
    #[error("maps disagree on H^0: {0}")]
    NotHomotopic(String),
    #[error("no d-preimage within the truncation: {0}")]
    AcyclicityFailure(String),
    #[error("no stabilization up to the cap q = {cap}")]
    CapReached { cap: i64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
