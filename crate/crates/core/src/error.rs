use alloc::string::String;

use thiserror::Error;

use crate::mention::MentionId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("synonym pair references unknown mention id {id} (table has {len} mentions)")]
    UnknownMention { id: MentionId, len: usize },

    #[error("synonym pair ({a}, {b}) is not canonical: expected a < b")]
    NonCanonicalPair { a: MentionId, b: MentionId },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{0} is undefined for this input")]
    Undefined(&'static str),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("rating matrix row {row} has {found} ratings, expected {expected}")]
    RaggedRatings { row: usize, expected: usize, found: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
