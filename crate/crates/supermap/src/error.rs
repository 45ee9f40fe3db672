use thiserror::Error;

/// Errors raised by the library. Verification failures are not errors; they
/// are recorded in reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot combine cyclotomic orders {0} and {1}")]
    Promotion(u64, u64),
    #[error("cannot parse scalar {0:?}")]
    ScalarParse(String),
    #[error("scalar {0} is not available in this field")]
    NotInField(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("unsupported family {0:?}")]
    UnsupportedFamily(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("bracket violation: {0}")]
    Bracket(String),
    #[error("order violation: {0}")]
    Order(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("action is not free: {0}")]
    Freeness(String),
    #[error("ideal is not stable under the group: {0}")]
    Stability(String),
    #[error("points {0} and {1} lie in the same orbit")]
    SameOrbit(String, String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported grading type: {0}")]
    UnsupportedType(String),
    #[error("datum is not equivariant: {0}")]
    Equivariance(String),
    #[error("inconsistent data: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
