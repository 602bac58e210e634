use thiserror::Error;

/// Errors raised by operator builders, tensor contractions and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("chain length must be even, got {0}")]
    OddLength(usize),

    #[error("chain length must be at least {min}, got {found}")]
    ChainTooShort { min: usize, found: usize },

    #[error("site {site} is outside 1..={sites}")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("site {0} appears twice after periodic wrap")]
    RepeatedSite(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Hilbert space dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("operator is not Hermitian (relative defect {0:.3e})")]
    NotHermitian(f64),

    #[error("operator couples different U(1) charge sectors (largest coupling {0:.3e})")]
    SymmetryBroken(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("state has weight {0:.3e} outside the diagonalized sector")]
    OutsideSector(f64),

    #[error("eigenvectors were not retained by this decomposition")]
    MissingEigenvectors,

    #[error("level statistics need at least 3 retained levels, got {0}")]
    TooFewLevels(usize),

    #[error("sector map does not partition the basis: {0}")]
    InvalidSectorMap(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

pub type Result<T> = std::result::Result<T, Error>;
