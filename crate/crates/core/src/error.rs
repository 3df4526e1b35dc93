use thiserror::Error;

/// Errors raised by the lattice, form and group kernels.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("gram matrix is degenerate")]
    Degenerate,
    #[error("lattice is not even: diagonal entry {0} is odd")]
    NotEven(usize),
    #[error("rescaling factor must be nonzero")]
    ZeroScale,
    #[error("completeness unavailable: lattice is indefinite")]
    CompletenessUnavailable,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("illegal Dynkin type {0}")]
    IllegalType(String),
    #[error("non-integral fundamental weight for node {0}")]
    NonIntegralWeight(usize),
    #[error("no orthogonal root decomposition for {0}")]
    NoDecomposition(String),
    #[error("type {0} has no tabulated A-vector")]
    NoAVector(String),
    #[error("discriminant form: {0}")]
    DiscriminantForm(String),
    #[error("quadratic space is degenerate")]
    DegenerateForm,
    #[error("field degree {0} unsupported")]
    FieldDegree(u32),
    #[error("partial map is not an isometry: {0}")]
    NotIsometric(String),
    #[error("ambient dimension {got} is not the extended discriminant space ({expected})")]
    WrongAmbient { expected: usize, got: usize },
    #[error("sampler exhausted {attempts} attempts: {reason}")]
    SamplerExhausted { attempts: usize, reason: String },
    #[error("tangent space has dimension {0}, expected 2")]
    TangentDimension(usize),
    #[error("period precondition failed: {0}")]
    PeriodPrecondition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
