use alloc::string::String;

/// Errors raised by the exact and numeric layers.
///
/// Every variant maps to a stable machine-readable clause through
/// [`Error::clause`]; the CLI emits that clause verbatim.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("unknown catalog key `{0}`")]
    UnknownCatalogKey(String),
    #[error("invalid catalog parameter: {0}")]
    InvalidParameter(String),
    #[error("vectors belong to different lattices")]
    LatticeMismatch,
    #[error("zero vector")]
    ZeroVector,
    #[error("q(l, l) != 0")]
    Isotropy,
    #[error("q(l, conj l) is not positive")]
    Positivity,
    #[error("span is not positive definite")]
    NotPositive,
    #[error("vector is not orthogonal to the period plane")]
    NotOrthogonal,
    #[error("vector does not lie in the subspace")]
    NotInSubspace,
    #[error("period points coincide")]
    SamePoint,
    #[error("hyperkähler line is not generic")]
    NotGeneric,
    #[error("retry budget exhausted after {0} candidates")]
    RetryBudgetExhausted(usize),
    #[error("lattice needs 3 positive directions, found {0}")]
    InsufficientPositive(usize),
    #[error("scale factor is not a square root of a rational number")]
    IrrationalRatio,
    #[error("invalid chain: {0}")]
    InvalidChain(&'static str),
    #[error("q(v, v) = {0}, expected +2 or -2")]
    BadReflectionNorm(String),
    #[error("matrix is not an isometry")]
    NotIsometry,
    #[error("rank {rank} exceeds search bound {bound}")]
    RankBound { rank: usize, bound: usize },
    #[error("auxiliary metric is not positive definite")]
    InvalidMetric,
    #[error("n must be at least 2")]
    InvalidDimension,
}

impl Error {
    /// Stable clause name for machine-readable error reports.
    pub fn clause(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension",
            Error::InvalidField(_) => "field",
            Error::NotSquare | Error::NotSymmetric => "gram",
            Error::Degenerate => "degenerate",
            Error::UnknownCatalogKey(_) => "catalog-key",
            Error::InvalidParameter(_) => "catalog-parameter",
            Error::LatticeMismatch => "lattice-mismatch",
            Error::ZeroVector => "zero-vector",
            Error::Isotropy => "isotropy",
            Error::Positivity => "positivity",
            Error::NotPositive => "positivity",
            Error::NotOrthogonal => "orthogonality",
            Error::NotInSubspace => "membership",
            Error::SamePoint => "same-point",
            Error::NotGeneric => "genericity",
            Error::RetryBudgetExhausted(_) => "retry-budget",
            Error::InsufficientPositive(_) => "signature",
            Error::IrrationalRatio => "irrational-ratio",
            Error::InvalidChain(c) => c,
            Error::BadReflectionNorm(_) => "reflection-norm",
            Error::NotIsometry => "isometry",
            Error::RankBound { .. } => "rank-bound",
            Error::InvalidMetric => "metric",
            Error::InvalidDimension => "dimension",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
