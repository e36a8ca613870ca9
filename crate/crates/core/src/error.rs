use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic {0} is below 5; pass the small-prime override to allow it")]
    SmallCharacteristic(u32),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
    #[error("algebra has no p-map")]
    NoPMap,
    #[error("subspace is not closed under the bracket")]
    NotBracketClosed,
    #[error("subspace is not closed under the p-map")]
    NotPClosed,
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("element is not semisimple")]
    NotSemisimple,
    #[error("element is not toral")]
    NotToral,
    #[error("torus generators do not commute")]
    NotCommuting,
    #[error("image of x_{0} has a nonzero constant term")]
    NonzeroConstantTerm(usize),
    #[error("linear part is singular; not an automorphism")]
    NotAnAutomorphism,
    #[error("automorphism does not normalize the torus")]
    DoesNotNormalize,
    #[error("module subspace is not stable under the torus")]
    NotTorusStable,
    #[error("subtorus is not contained in the torus")]
    NotASubtorus,
    #[error("construction invariant violated: {0}")]
    Construction(String),
    #[error("malformed algebra file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
