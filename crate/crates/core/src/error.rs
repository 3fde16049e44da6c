use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Rejection sampling for a simple graph ran out of attempts.
    #[error("no simple graph after {attempts} configuration-model attempts")]
    SimplicityExhausted { attempts: usize },

    /// The tilted p-tree sampler accepted too rarely to be useful.
    #[error(
        "tilted sampler acceptance rate {rate:.3e} fell below floor {floor:.3e} \
         after {proposals} proposals (log envelope {log_envelope:.3}); \
         reduce `a` or raise the floor"
    )]
    AcceptanceTooLow {
        rate: f64,
        floor: f64,
        proposals: usize,
        log_envelope: f64,
    },

    #[error("unknown experiment `{name}`; registered experiments: {registered}")]
    UnknownExperiment { name: String, registered: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand used throughout the crate for precondition failures.
pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
