use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported gate `{name}` at line {line}")]
    UnsupportedGate { name: String, line: usize },
    #[error("unsupported construct at line {line}: {what}")]
    Unsupported { what: String, line: usize },
    #[error("index {index} out of range for register `{register}` of size {size} (line {line})")]
    IndexOutOfRange {
        register: String,
        index: usize,
        size: usize,
        line: usize,
    },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("unknown topology `{0}`")]
    UnknownTopology(String),
    #[error("topology is disconnected")]
    Disconnected,
    #[error("circuit needs {needed} qubits but the device has {available}")]
    TooManyQubits { needed: usize, available: usize },
    #[error("fold edge index {index} out of range for a path with {edges} edges")]
    FoldOutOfRange { index: usize, edges: usize },
    #[error("simulation limit exceeded: {qubits} qubits (max {max})")]
    SimulationTooLarge { qubits: usize, max: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
