use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has a leaf at vertex {vertex} (degree {degree})")]
    Leaf { vertex: usize, degree: usize },

    #[error("rank mismatch: cover has {cover} colors but pattern has rank {pattern}")]
    RankMismatch { cover: usize, pattern: usize },

    #[error("jacobi data does not match graph: {0}")]
    JacobiMismatch(String),

    #[error("jacobi data is not constant over the cover: {0}")]
    NonConstantData(String),

    #[error("{what} needs {requested} vertices, over the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: usize,
    },

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("eigensolver failed: {0}")]
    Eigen(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
