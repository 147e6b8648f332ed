use thiserror::Error;

use crate::minors::Model;

/// Errors raised by library operations.
///
/// Verification verdicts are never reported through this type: a failed
/// certificate check is data (a report with `valid == false`), while an
/// `Error` means the operation could not produce an answer at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },

    /// A caller-asserted precondition turned out to be false. When the
    /// violation is witnessed by a minor model, it is attached.
    #[error("precondition violated: {reason}")]
    PreconditionViolated {
        reason: String,
        evidence: Option<Box<Model>>,
    },

    /// A construction produced an object that failed its own certificate
    /// check. Never expected; surfaced instead of a wrong answer.
    #[error("internal certificate failure: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(reason: impl Into<String>, evidence: Option<Model>) -> Self {
        Error::PreconditionViolated {
            reason: reason.into(),
            evidence: evidence.map(Box::new),
        }
    }

    pub(crate) fn cert(msg: impl Into<String>) -> Self {
        Error::Certificate(msg.into())
    }
}
