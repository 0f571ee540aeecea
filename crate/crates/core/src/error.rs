use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants split into caller-facing domain errors (bad input, violated
/// preconditions, budgets) and [`Error::Internal`], which signals a broken
/// invariant inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("size limit exceeded: {what} exceeds cap {cap}")]
    SizeExceeded { what: String, cap: u64 },

    #[error("outside the validity envelope: {0}")]
    Domain(String),

    #[error("undefined input: {0}")]
    Undefined(String),

    #[error("pole: pair (A={a}, B={b}) has A*s - B <= 0 at s = {s}")]
    Pole { a: i64, b: i64, s: f64 },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("divergent cone: generator {generator:?} has n.v = {n_dot}, m.v = {m_dot}")]
    DivergentCone {
        generator: Vec<i64>,
        n_dot: i64,
        m_dot: i64,
    },

    #[error("insufficient level: coordinate {coord} is 0 mod p^{level}")]
    InsufficientLevel { coord: usize, level: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
