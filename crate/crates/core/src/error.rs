use thiserror::Error;

use crate::integrator::TrajectoryResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the physical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at the solenoid axis, where the line-flux force law diverges.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The integrator gave up. The partial trajectory is kept for inspection.
    #[error("convergence failure: {reason}")]
    Convergence {
        reason: String,
        partial: Box<TrajectoryResult>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
