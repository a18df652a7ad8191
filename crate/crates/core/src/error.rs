use thiserror::Error;

/// Errors raised by the combinatorial and linear-algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("cannot rotate: the {0} row is empty")]
    EmptyRow(&'static str),
    #[error("bound exceeded: {what} = {requested} exceeds the limit {limit}")]
    BoundExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("colour mismatch: {0}")]
    ColourMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("operation requires an abelian group")]
    NonAbelian,
    #[error("invalid irreducible representation: {0}")]
    InvalidIrrep(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("category is not block-stable within {0} points")]
    NotBlockStable(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_bound(what: &'static str, requested: usize, limit: usize) -> Result<()> {
    if requested > limit {
        Err(Error::BoundExceeded {
            what,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}
