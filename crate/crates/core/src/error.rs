use thiserror::Error;

/// Errors raised by set construction, reductions, domains and audits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value left the 64-bit natural range.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown builder `{0}`")]
    UnknownBuilder(String),

    /// `sigma_inv` was asked for the rank of a code outside the domain.
    #[error("code {0} is not a member of the domain")]
    NotInDomain(u64),

    /// A construction that requires a computable rule was handed an oracle-backed set.
    #[error("set `{0}` is not rule-backed; a decidable rule is required")]
    NotRuleBacked(String),

    #[error("descriptor mismatch: `{left}` does not match `{right}`")]
    DescriptorMismatch { left: String, right: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A candidate domain map sent an input outside the target domain.
    #[error("range violation: f({input}) = {image} is not a member of {domain}")]
    RangeViolation {
        input: u64,
        image: u64,
        domain: String,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn capacity(what: impl Into<String>) -> Error {
    Error::Capacity(what.into())
}
