use thiserror::Error;

use crate::nominal::Name;
use crate::zsub::Bit;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("box face ({name}, {bit}) mentions its own direction {name}")]
    FreshnessViolation { name: Name, bit: Bit },

    #[error("faces ({b}, {i}) and ({c}, {j}) disagree on their common edge")]
    AdjacencyViolation { b: Name, i: Bit, c: Name, j: Bit },

    #[error("face ({name}, {bit}) does not lie over the base")]
    NotOverBase { name: Name, bit: Bit },

    #[error("malformed box: {0}")]
    MalformedBox(String),

    #[error("element is not a member of {0}")]
    NotMember(String),

    #[error("illegal substitution: {0}")]
    IllegalSubstitution(String),

    #[error("morphism does not commute with the squares: {0}")]
    CommutationViolation(String),

    #[error("element support escapes the cube: {0}")]
    SupportEscape(String),

    #[error("support of the carrier is not computable: {0}")]
    SupportNotComputable(String),

    #[error("not a normal form: {0}")]
    NotNormalForm(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("schema error at {location}: {message}")]
    SchemaError { location: String, message: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),
}

impl Error {
    pub fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        let location = location.into();
        Error::SchemaError {
            location: if location.is_empty() {
                "$".into()
            } else {
                location
            },
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
