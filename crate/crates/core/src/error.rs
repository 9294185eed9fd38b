use thiserror::Error;

use crate::index::IndexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("invalid shape: order {order} must be >= 2 and dim {dim} >= 1")]
    InvalidShape { order: usize, dim: usize },
    #[error("index tuple {idx:?} has length {got}, expected order {expected}")]
    WrongArity {
        idx: Vec<usize>,
        expected: usize,
        got: usize,
    },
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate index tuple {idx:?} with conflicting values")]
    ConflictingDuplicate { idx: Vec<usize> },
    #[error("vector of length {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("tensor shapes differ: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("index set has {got} slots, tensor dimension is {expected}")]
    IndexSetMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZFormError {
    #[error("not a Z-tensor: off-diagonal entry at {idx:?} is positive")]
    PositiveOffDiagonal { idx: Vec<usize> },
    #[error("diagonal entry {index} is negative")]
    NegativeDiagonal { index: usize },
    #[error("absorbed tensor must be nonnegative with zero diagonal (entry {idx:?})")]
    InvalidOffDiagonalPart { idx: Vec<usize> },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("index set {0} must be a nonempty proper subset of [n]")]
    InvalidSubset(IndexSet),
    #[error("exhaustive subset search over dimension {dim} exceeds guard {guard}")]
    GuardExceeded { dim: usize, guard: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("tensor has a negative entry at {idx:?}")]
    NotNonnegative { idx: Vec<usize> },
    #[error("tensor is not weakly irreducible")]
    NotWeaklyIrreducible,
    #[error("power iteration did not converge in {iterations} iterations (bracket width {width:e})")]
    MaxItersExceeded { iterations: usize, width: f64 },
    #[error("power iterate lost positivity at iteration {iterations}")]
    LostPositivity { iterations: usize },
    #[error("brute-force oracle limited to n <= {max_dim} and m <= {max_order}; got n = {dim}, m = {order}")]
    OracleGuard {
        dim: usize,
        order: usize,
        max_dim: usize,
        max_order: usize,
    },
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("no real eigenpair found")]
    NoEigenpairFound,
    #[error("characteristic polynomial requires dimension 2, got {0}")]
    NotDimensionTwo(usize),
    #[error("characteristic polynomial vanishes identically")]
    DegeneratePolynomial,
    #[error("tensors have different orders ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("entry at {idx:?} has no exact rational value")]
    NonRational { idx: Vec<usize> },
    #[error(transparent)]
    ZForm(#[from] ZFormError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimilarityError {
    #[error("diagonal scaling has a zero at position {0}")]
    ZeroScaling(usize),
    #[error("off-diagonal part is not weakly irreducible")]
    NotWeaklyIrreducible,
    #[error(transparent)]
    ZForm(#[from] ZFormError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("generator gave up after {0} retries")]
    RetriesExhausted(usize),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    ZForm(#[from] ZFormError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
