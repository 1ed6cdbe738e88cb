use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid vector {0:?}")]
    Vector(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors must have at least one coordinate")]
    EmptyVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid pseudonorm: {0}")]
    InvalidPseudonorm(String),
    #[error("pseudonorm family must be nonempty")]
    EmptyFamily,
    #[error("pseudonorm index {index} out of range for a family of {len}")]
    BadIndex { index: usize, len: usize },
    #[error("invalid neighborhood: {0}")]
    InvalidNeighborhood(String),
}

/// Errors raised by filter construction and queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    /// The proposed class violates one of the filter or filter-base axioms.
    #[error("construction error: {axiom}")]
    Construction {
        axiom: String,
        witness: serde_json::Value,
    },
    #[error("filters live on different universes")]
    UniverseMismatch,
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl FilterError {
    pub fn construction(axiom: impl Into<String>, witness: serde_json::Value) -> Self {
        FilterError::Construction {
            axiom: axiom.into(),
            witness,
        }
    }
}
