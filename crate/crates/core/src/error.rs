use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected input: bad sign, unknown key, inconsistent configuration.
    #[error("validation: {0}")]
    Validation(String),

    /// A velocity at or beyond the speed of light.
    #[error("kinematics: {0}")]
    Kinematics(String),

    /// Non-finite state produced while integrating a characteristic.
    #[error("flow diverged at tau = {tau}: {reason}")]
    FlowDivergence { tau: f64, reason: String },

    /// A quantity that must be finite was not (divergence, Lagrangian, initial data).
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Quadrature or grid set up too coarsely to meet its own tolerance.
    #[error("configuration: {0}")]
    Configuration(String),

    /// A numerical procedure failed its own convergence check.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Process exit status used by the scenario runner: 2 for anything the
    /// caller can fix by changing input, 3 for numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::Kinematics(_)
            | Error::Configuration(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::FlowDivergence { .. } | Error::NonFinite(_) | Error::Numerical(_) => 3,
        }
    }
}
