use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("port `{port}`: {msg}")]
    PortWidth { port: String, msg: String },
    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),
    #[error("netlist text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("probability mass function does not sum to 1 (sum = {0})")]
    PmfNormalization(f64),
    #[error("invalid probability mass function: {0}")]
    InvalidPmf(String),
    #[error("operation class mismatch: expected {expected}, found {found}")]
    ClassMismatch { expected: String, found: String },
    #[error("no probability mass function for operation node `{0}`")]
    MissingPmf(String),
    #[error("unknown circuit id `{0}`")]
    UnknownCircuit(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("image: {0}")]
    Image(String),
    #[error("design space of {size} configurations exceeds the enumeration cap of {cap}")]
    SpaceTooLarge { size: f64, cap: u64 },
    #[error("empty input: {0}")]
    Empty(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
