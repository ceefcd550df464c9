use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop requested on vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) is already present")]
    EdgePresent(usize, usize),
    #[error("edge ({0}, {1}) is absent")]
    EdgeAbsent(usize, usize),
    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("alpha {alpha} too large for spectral radius {radius}; the Katz series diverges")]
    AlphaGuard { alpha: f64, radius: f64 },
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("size mismatch: expected {expected} players, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("singular linear system")]
    Singular,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
