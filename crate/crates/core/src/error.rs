use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |H[{row}][{col}] - conj(H[{col}][{row}])| = {deviation:e}")]
    NonHermitianInput {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix dimension {0} exceeds the supported maximum of 32")]
    DimensionTooLarge(usize),

    #[error("eigensolver did not converge (off-diagonal norm {0:e})")]
    NoConvergence(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid spin Hamiltonian parameters: {0}")]
    InvalidParams(String),

    #[error("linewidth must be positive and finite, got {0:e}")]
    NonPositiveWidth(f64),

    #[error("temperature must be non-negative, got {0} K")]
    NegativeTemperature(f64),

    #[error("delta lineshape is only defined under an integral; use a broadened lineshape")]
    DeltaKindUnsupported,

    #[error("invalid inputs: {0}")]
    InvalidInputs(String),

    #[error("{name} must be non-negative, got {value:e}")]
    NegativeInput { name: &'static str, value: f64 },

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("species database: species '{species}', field '{field}': {message}")]
    Database {
        species: String,
        field: String,
        message: String,
    },

    #[error("emission table: line '{label}', field '{field}': {message}")]
    EmissionTable {
        label: String,
        field: String,
        message: String,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInputs(msg.into())
    }
}
