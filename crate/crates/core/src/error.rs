use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or configuration value violates its invariant.
    #[error("invalid {what}: {reason}")]
    InvalidInput { what: &'static str, reason: String },

    /// A rational functional response was evaluated where its denominator vanishes.
    #[error("domain error: {0}")]
    Domain(String),

    /// The integrated state left the finite range allowed by the divergence guard.
    #[error("integration diverged at t = {time} (|x| = {magnitude:e})")]
    Diverged { time: f64, magnitude: f64 },

    #[error("non-finite state at t = {time}")]
    NonFinite { time: f64 },

    /// Re-orthonormalization met a tangent vector whose norm underflowed.
    #[error("degenerate tangent frame at t = {time}: column {column} has norm {norm:e}")]
    DegenerateFrame {
        time: f64,
        column: usize,
        norm: f64,
    },

    #[error("control target is not an equilibrium (residual {residual:e})")]
    NotEquilibrium { residual: f64 },

    #[error("no real eigenvalue found (numerical failure)")]
    NoRealEigenvalue,
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            what,
            reason: reason.into(),
        }
    }
}
