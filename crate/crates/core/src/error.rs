use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input parameters (non-prime modulus, violated construction hypotheses, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Value outside the domain of an operation, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive computation would exceed its work budget.
    ///
    /// `certified` carries a verified lower bound when the computation got far
    /// enough to establish one before refusing.
    #[error("budget exceeded in {what}: estimated {estimate} > limit {limit}")]
    Budget {
        what: String,
        estimate: u128,
        limit: u128,
        certified: Option<u64>,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An arithmetic result violated an invariant that always holds in a correct implementation.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
