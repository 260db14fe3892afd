use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column `{column}`: cannot parse `{value}` as a finite number")]
    ParseNumber {
        row: usize,
        column: String,
        value: String,
    },

    #[error("feature `{feature}`: unseen category `{value}`")]
    UnseenCategory { feature: String, value: String },

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("class {class} has {count} rows; at least 2 are required to split")]
    ClassTooSmall { class: usize, count: usize },

    #[error("binary classifier required, found {0} classes")]
    NotBinary(usize),

    #[error("training diverged: non-finite loss at iteration {iteration}")]
    NonFiniteLoss { iteration: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid sampling region at feature {feature}: lower bound must be below upper bound")]
    InvalidRegion { feature: usize },

    #[error("importance requires tree model")]
    NotATreeModel,

    #[error("oracle failed on row {row}: {reason}")]
    OracleFailure { row: usize, reason: String },

    #[error("unconstrained copy did not reach zero empirical error (train accuracy {accuracy})")]
    NonzeroEmpiricalError { accuracy: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("importance vector has a negative entry at index {0}")]
    NegativeImportance(usize),

    #[error("importance vector sums to zero")]
    ZeroImportance,

    #[error("prevalence calibration failed: {0}")]
    Calibration(String),
}
