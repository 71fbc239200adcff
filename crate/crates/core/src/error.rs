use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point {0:?} does not lie in the domain")]
    NotInDomain(Vec<f64>),

    #[error("exponent must be finite and >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("invalid cost matrix: {0}")]
    InvalidCostMatrix(String),

    #[error("tuple size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("domain descriptors of the two inputs differ")]
    DomainMismatch,

    #[error("brute-force budget exceeded: {total} points (limit {limit})")]
    BudgetExceeded { total: usize, limit: usize },

    #[error("tuple of size {size} exceeds the bound m = {bound}")]
    TooManyPoints { size: usize, bound: usize },

    #[error("malformed coupling: {0}")]
    MalformedCoupling(String),

    #[error("whitney search failed: {0}")]
    WhitneySearch(String),

    #[error("cube {0} is not a selected whitney cube")]
    NotSelected(String),

    #[error("invalid direction family: {0}")]
    InvalidDirections(String),

    #[error("lower-bound certificate failed at step `{step}`: {detail}")]
    Certificate { step: &'static str, detail: String },

    #[error("witness construction failed: {0}")]
    Witness(String),

    #[error("barcode line {line}: {message}")]
    Barcode { line: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
