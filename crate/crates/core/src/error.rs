use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NotFinite,
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tolerance {name}={value}: must lie in (0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("a frame needs at least one vector and a positive ambient dimension")]
    EmptyFrame,
    #[error("family does not span R^{dim} (rank {rank})")]
    NotAFrame { rank: usize, dim: usize },
    #[error("need at least {needed} vectors, found {found}")]
    TooFewVectors { needed: usize, found: usize },
    #[error("coefficients must be nonzero (alpha={alpha}, beta={beta})")]
    ZeroCoefficient { alpha: f64, beta: f64 },
    #[error("families differ in shape: {left_dim}x{left_len} vs {right_dim}x{right_len}")]
    ShapeMismatch {
        left_dim: usize,
        left_len: usize,
        right_dim: usize,
        right_len: usize,
    },
    #[error("subset mask {mask:#b} does not fit {m} indices")]
    InvalidSubset { m: usize, mask: u64 },
    #[error("enumeration limit exceeded: m={m} is above the limit of {limit}")]
    EnumerationLimitExceeded { m: usize, limit: usize },
    #[error("the subset policy leaves no weavings to examine for m={m}")]
    EmptyEnumeration { m: usize },
    #[error("premise failed: the first pair is not woven")]
    NotWovenPremise,
    #[error("family consists only of zero vectors")]
    ZeroFamily,
    #[error("list of bounds is empty")]
    EmptyList,
    #[error("bound {value} is not positive")]
    NonPositiveBound { value: f64 },
    #[error("subset must be nontrivial (neither empty nor the full index set)")]
    TrivialSubset,
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
}
