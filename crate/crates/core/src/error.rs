use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    /// Malformed group or action tables, non-closed subsets, bad window shapes.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// An operation was called on data violating its precondition
    /// (e.g. non-commuting actions where commuting ones are required).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("unknown element {element} in group of order {order}")]
    UnknownElement { element: usize, order: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// The algebra has a non-trivial center; `witness` is the max-abs entry
    /// summary of a central non-scalar element.
    #[error("not a factor: center has dimension {center_dim} (witness norm {witness_norm:.3e})")]
    NotAFactor {
        center_dim: usize,
        witness_norm: f64,
        witness: Box<crate::matrix::ComplexMatrix>,
    },

    #[error("zero vector")]
    ZeroVector,

    #[error("discretization error: {0}")]
    Discretization(String),

    #[error("transversality failure: {0}")]
    Transversality(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("empty suite list")]
    EmptySuite,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::UnknownSuite(_) | LabError::EmptySuite => 2,
            LabError::Config(_) | LabError::Parse(_) => 3,
            LabError::DimensionCap { .. } => 4,
            LabError::Io { .. } => 5,
            _ => 1,
        }
    }
}
