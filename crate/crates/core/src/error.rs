use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: lo offset {lo} exceeds hi offset {hi}")]
    InvalidGrid { lo: i64, hi: i64 },

    #[error("offset {offset} lies outside grid [{lo}, {hi}]")]
    OffGrid { offset: i64, lo: i64, hi: i64 },

    #[error("grid too short: {0}")]
    GridTooShort(String),

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid order {nu}: {reason}")]
    InvalidOrder { nu: f64, reason: &'static str },

    #[error("coefficient p must be positive, found {value} at offset {offset}")]
    NonPositiveP { offset: i64, value: f64 },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid ghost closure: {0}")]
    InvalidClosure(String),

    #[error("invalid boundary specification: {0}")]
    InvalidBoundary(String),

    #[error("D matrix is near singular (scaled determinant {scaled_det:e})")]
    NearSingular { scaled_det: f64 },

    #[error("degenerate denominator b - a - H(b,a) = {value:e}")]
    DegenerateDenominator { value: f64 },

    #[error("singular system: pivot {pivot:e} in column {column} below threshold {threshold:e}")]
    SingularSystem {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
