//! Error type shared by every fallible operation in the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// `Domain`, `Singularity` and `Geometry` indicate a caller-side contract
/// violation; `Solver` and `Truncation` indicate a numerical method that
/// failed its own certificate and should be treated as a computation failure.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation point coincides with a kernel's singular point.
    #[error("singular evaluation: separation {dist:.3e} is below guard {guard:.0e}")]
    Singularity { dist: f64, guard: f64 },

    /// Geometry constraint violated (overlap, containment, positivity).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A linear solve failed to meet its residual certificate.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A scan hit its order bound; the bound must be raised.
    #[error("truncation: {0}")]
    Truncation(String),

    /// Invalid or inconsistent configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub fn solver(msg: impl Into<String>) -> Self {
        Error::Solver(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
