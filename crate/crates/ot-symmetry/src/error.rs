use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spherical sign undefined for the zero vector")]
    SphericalZeroVector,
    #[error("cost matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteCost { row: usize, col: usize },
    #[error("brute-force oracle limited to n <= {limit}, got {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("reference norms {0} and {1} coincide; spherical fast path needs distinct norms")]
    DuplicateNorms(usize, usize),
    #[error("uniform ERD is not permissible with the spherical group")]
    IncompatibleErd,
    #[error("reference points {0} and {1} lie on the same group orbit")]
    OrbitCollision(usize, usize),
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("ERD covariance is singular")]
    SingularErd,
    #[error("sample covariance is singular or ill-conditioned")]
    SingularCovariance,
    #[error("need n > p observations for Hotelling's T², got n = {n}, p = {p}")]
    TooFewObservations { n: usize, p: usize },
    #[error("data size {data} does not match reference size {reference}")]
    SizeMismatch { data: usize, reference: usize },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("confidence grid is empty")]
    EmptyGrid,
    #[error("{0}")]
    Domain(String),
    #[error("matrix list is not a valid orthogonal group: {0}")]
    InvalidGroup(String),
    #[error("csv parse error at line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
