use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("constant term is zero; power series is not invertible")]
    NotInvertible,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("inexact division: nonzero remainder {remainder}")]
    InexactDivision { remainder: String },

    #[error("identity failed: {0}")]
    IdentityFailed(String),

    #[error("exponent multiset is not Galois-invariant: {0}")]
    NotGaloisInvariant(String),

    #[error("no integer solution: {0}")]
    Unsolvable(String),

    #[error("inhomogeneous entry: {0}")]
    Inhomogeneous(String),

    #[error("not a matrix factorization: {0}")]
    NotFactorization(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("serialization: {0}")]
    Serde(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
