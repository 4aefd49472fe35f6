use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("zero spectral gap: eigenvalue {inside} (inside) coincides with eigenvalue {outside} (outside)")]
    ZeroGap { inside: usize, outside: usize },

    #[error("contour disks around {a} and {b} overlap (distance {distance:e} < gap {gap:e})")]
    OverlappingDisks {
        a: f64,
        b: f64,
        distance: f64,
        gap: f64,
    },

    #[error("contour radius is unbounded: the index set covers the whole spectrum")]
    UnboundedContour,

    #[error("pole {pole} lies on the integration contour")]
    PoleOnContour { pole: String },

    #[error("too few quadrature nodes: {got} < {min}")]
    TooFewNodes { got: usize, min: usize },

    #[error("perturbed eigenvalue {index} entered the contour region despite the gap condition")]
    GapViolation { index: usize },

    #[error("invalid kernel spectrum: {0}")]
    BadSpectrum(String),

    #[error("eigenvalue {index} is {value:e}, below the admissibility threshold")]
    ZeroEigenvalue { index: usize, value: f64 },

    #[error("kernel is degenerate: lambda_max = {0:e}")]
    DegenerateKernel(f64),

    #[error("tau must lie in (0, 1), got {0}")]
    BadTau(f64),

    #[error("condition violated: {message}")]
    ConditionViolated {
        message: String,
        required_n: Option<usize>,
    },

    #[error("covariance is not positive semi-definite: min eigenvalue {0:e}")]
    NonPsdCovariance(f64),

    #[error("sample is empty")]
    EmptySample,

    #[error("cluster rank {rank} out of range (found {clusters} clusters)")]
    RankOutOfRange { rank: usize, clusters: usize },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("json: {0}")]
    Json(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
