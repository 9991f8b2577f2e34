use ldlc_ratmath::MathError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum KemError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("singular construction: {0}")]
    Singular(String),
    #[error("key generation failed: {0}")]
    KeyGen(String),
    #[error("format error at byte {offset}: {reason}")]
    Format { offset: usize, reason: String },
    #[error("dimension {n} exceeds the limit of {limit} for {what}")]
    Scale {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("secret and public key do not match: {0}")]
    KeyMismatch(String),
    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, KemError>;

pub(crate) fn param(msg: impl Into<String>) -> KemError {
    KemError::Param(msg.into())
}

pub(crate) fn unknown(kind: &'static str, name: &str, available: &[&str]) -> KemError {
    KemError::UnknownName {
        kind,
        name: name.to_string(),
        available: available.join(", "),
    }
}
