use thiserror::Error;

use crate::tuple::KTuple;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A family file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The input family does not have the property the construction needs.
    #[error("precondition violated: {reason}{}", witness_suffix(.witness))]
    Precondition {
        reason: String,
        witness: Option<KTuple>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The exhaustive search refuses to start on an instance this large.
    #[error("instance too large: {reason} (estimated {estimate:.3e} nodes)")]
    Infeasible { reason: String, estimate: f64 },

    /// A result failed its independent re-check.
    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn witness_suffix(w: &Option<KTuple>) -> String {
    match w {
        Some(t) => format!(" (failing tuple {t})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
