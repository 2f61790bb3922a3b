use thiserror::Error;

/// Errors raised by oracles, algorithms and the instance tooling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element {id} is out of range for a ground set of size {ground}")]
    OutOfRange { id: usize, ground: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A documented precondition of an operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Something that is provably impossible for valid matroids/submodular
    /// functions happened. Indicates a bug or an oracle that breaks its axioms.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("{what} has {size} elements, exhaustive search is capped at {cap}")]
    Scale {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
