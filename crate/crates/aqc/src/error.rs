use elmkit_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AqcError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("epsilon must be a decimal strictly between 0 and 1, got {text:?}")]
    InvalidEpsilon { text: String },
    #[error("interpolation grid needs at least 2 samples, got {grid}")]
    InvalidGrid { grid: usize },
    #[error("transverse-field scale must be positive, got {scale}")]
    NonPositiveScale { scale: f64 },
    #[error("custom diagonal has {got} entries; a {qubits}-qubit problem needs {expected}")]
    DiagonalLength {
        got: usize,
        expected: usize,
        qubits: u32,
    },
}
