use thiserror::Error;

use crate::linalg::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("subsystem label `{0}` appears in both operands")]
    LabelCollision(String),
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("layout must contain between 1 and {max} qubits, got {got}")]
    LayoutSize { got: usize, max: usize },
    #[error("at least one subsystem must be kept")]
    EmptySelection,
    #[error("{0:?} is not a permutation of the layout labels")]
    NotPermutation(Vec<String>),
    #[error("layout mismatch: expected {expected:?}, found {found:?}")]
    LayoutMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("operator is not Hermitian (max defect {0:e})")]
    NotHermitian(f64),
    #[error("expectation value has imaginary part {0:e}")]
    ComplexExpectation(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(ValidationReport),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("ensemble size {size} is below the state rank {rank}")]
    EnsembleTooSmall { size: usize, rank: usize },
    #[error("phase discretization needs at least 3 points, got {0}")]
    TooFewPhasePoints(usize),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("inconsistent bipartition: {0}")]
    Bipartition(String),
    #[error("configuration error:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
    #[error("report serialization: {0}")]
    Serialization(String),
}
