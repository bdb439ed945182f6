//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported affine type `{0}`")]
    UnsupportedType(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("index {index} is out of range for {what}")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("not a root: {0}")]
    NotARoot(String),
    #[error("invalid path expression: {0}")]
    InvalidPath(String),
    #[error("not an LS-type path: {0}")]
    NotLsType(String),
    #[error("weights are not comparable")]
    NotComparable,
    #[error("weight is not in the orbit: {0}")]
    NotInOrbit(String),
    #[error("invalid component signature at position {position}: {reason}")]
    InvalidSignature { position: usize, reason: String },
    #[error("vertex cap of {cap} exceeded ({found} vertices found)")]
    CapExceeded { cap: usize, found: usize },
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
