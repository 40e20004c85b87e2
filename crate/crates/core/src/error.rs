use thiserror::Error;

/// Errors raised by grid construction, stencil evaluation and the study harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WenoError {
    #[error("invalid domain: need b > a and at least one interval, got [{a}, {b}] with {intervals} intervals")]
    InvalidDomain { a: f64, b: f64, intervals: usize },

    #[error("non-finite sample at node {index} (x = {x})")]
    NonFiniteSample { index: usize, x: f64 },

    #[error("{what} index {index} out of range [{min}, {max}]")]
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        min: i64,
        max: i64,
    },

    #[error("stencil of length {expected} required, got {got}")]
    StencilLength { expected: usize, got: usize },

    #[error("sub-stencil (offset {k}, degree {degree}) does not fit a stencil of {len} values")]
    InvalidSubstencil { k: usize, degree: usize, len: usize },

    #[error("input of length {len} too short, need at least {min}")]
    TooShortInput { len: usize, min: usize },

    #[error("lowest derivative order must be 1 or 2, got {0}")]
    InvalidLMin(usize),

    #[error("{what} is not available for r = {r}")]
    UnsupportedOrder { what: &'static str, r: usize },

    #[error("grid with {intervals} intervals is too small, need at least {needed}")]
    GridTooSmall { intervals: usize, needed: usize },

    #[error("x = 0 is not inside the domain ({a}, {b})")]
    ZeroNotInDomain { a: f64, b: f64 },

    #[error("x = {x} lies outside the domain [{a}, {b})")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("offset {offset} has no full stencil on level {level}")]
    OffsetOutOfRange { offset: i64, level: u32 },

    #[error("unknown report format '{0}' (expected csv, markdown or json)")]
    UnknownFormat(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = WenoError> = std::result::Result<T, E>;
