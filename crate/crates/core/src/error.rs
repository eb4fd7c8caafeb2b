use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("pairing of generators is not integral: {0}")]
    NonIntegralPairing(String),
    #[error("vector has odd self-product: {0}")]
    OddNorm(String),
    #[error("degenerate quadratic space")]
    DegenerateSpace,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("not a sublattice: {0}")]
    NotSublattice(String),
    #[error("group too large for exhaustive search: {size} elements (limit {limit})")]
    TooLarge { size: u64, limit: u64 },
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("map is not an embedding of quadratic forms: {0}")]
    NotEmbedding(String),
    #[error("invalid finite quadratic form: {0}")]
    InvalidForm(String),
    #[error("no lattice realization found within the search bound for {0}")]
    RealizationNotFound(String),
    #[error("lattice matches several catalog rows: {0:?}")]
    AmbiguousMatch(Vec<usize>),
    #[error("configuration has no section")]
    NoSection,
    #[error("search exhausted: {0}")]
    NotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer overflow converting {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
