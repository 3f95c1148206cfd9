use thiserror::Error;

use crate::densmat::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("subsystem label `{0}` appears on both operands")]
    LabelCollision(String),

    #[error("subsystem label `{0}` not found")]
    LabelNotFound(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(ValidationReport),

    #[error("eigenvalue {0:.3e} is below the clipping threshold")]
    NegativeEigenvalue(f64),

    #[error("value out of domain: {0}")]
    DomainError(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionError { expected: usize, got: usize },

    #[error("pure input required (purity {0:.12})")]
    PurityRequired(f64),

    #[error("no mutual-information ordering holds for any labeling")]
    OrderingUnavailable,

    #[error("invalid channel initialization: {0}")]
    InvalidInitialization(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed density file: {0}")]
    Json(#[from] serde_json::Error),
}
