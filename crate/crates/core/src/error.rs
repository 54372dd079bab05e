//! Error type shared by all modules.

/// Errors reported by the numerical core.
///
/// `InvalidArgument` covers precondition breaches (bad cutoffs, mismatched
/// dimensions, out-of-range indices). `NonConvergence` covers truncation and
/// resolution failures and always carries the measured residual (tail mass,
/// completeness deficit, normalization deficit) so callers can report it.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not converged: {context} (residual {residual:.3e})")]
    NonConvergence { context: String, residual: f64 },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn non_convergence(context: impl Into<String>, residual: f64) -> Self {
        Error::NonConvergence {
            context: context.into(),
            residual,
        }
    }

    /// The residual carried by a non-convergence error, if any.
    pub fn residual(&self) -> Option<f64> {
        match self {
            Error::NonConvergence { residual, .. } => Some(*residual),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
