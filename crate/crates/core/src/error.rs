use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix must have at least one row")]
    EmptyMatrix,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("index lists differ in length ({rows} rows, {cols} columns)")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),
    #[error("index lists need at least {min} entries, got {len}")]
    ListTooShort { len: usize, min: usize },
    #[error("indices must be pairwise distinct")]
    IndicesNotDistinct,
    #[error("operation needs n >= {min}, got n = {n}")]
    TooSmall { n: usize, min: usize },
    #[error("dimension {n} exceeds the enumeration guard of {max}")]
    DimensionGuard { n: usize, max: usize },
    #[error("matrix is {matrix}x{matrix} but the tree has {tree} vertices")]
    DimensionMismatch { matrix: usize, tree: usize },

    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} listed twice")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} closes a cycle")]
    Cycle(usize, usize),
    #[error("vertex {0} is not connected to vertex 1")]
    Disconnected(usize),
    #[error("path endpoints must differ (got {0} twice)")]
    SameEndpoints(usize),

    #[error("matrix is singular")]
    Singular,
    #[error("matrix has a non-positive entry at ({row}, {col})")]
    NotPositive { row: usize, col: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix has no real eigenvalue")]
    NoRealEigenvalue,
    #[error("a complex eigenvalue lies below the smallest real eigenvalue")]
    ComplexSmallest,
    #[error("eigen-solver did not converge in {0} iterations")]
    NoConvergence(usize),

    #[error("negative-determinant hunt is vacuous on a path tree")]
    PathTree,
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
}
