use std::path::PathBuf;

/// Errors raised anywhere in the solve/estimate/mark/refine pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown domain `{0}` (expected unit_square_crisscross, l_shape or crack)")]
    UnknownDomain(String),
    #[error("mesh size {h} does not divide the side length {side} into an integer grid")]
    NonDivisibleMeshSize { h: f64, side: f64 },
    #[error("triangle {triangle} is degenerate (signed area {area:e})")]
    DegenerateTriangle { triangle: usize, area: f64 },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("{kind} id {id} out of range (have {len})")]
    InvalidId { kind: &'static str, id: usize, len: usize },
    #[error("unsupported quadrature degree {0}")]
    UnsupportedDegree(usize),
    #[error("diffusion coefficient is not symmetric positive definite on triangle {triangle}")]
    NotSpd { triangle: usize },
    #[error("matrix entry ({row}, {col}) out of range for dimension {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },
    #[error("linear solve did not reach tolerance {tol:e} (relative residual {residual:e})")]
    SolveTolerance { residual: f64, tol: f64 },
    #[error("post-processing factor 1 + S(T) gamma / (4|T|) = {factor:e} is near zero on triangle {triangle}")]
    NearSingularFactor { triangle: usize, factor: f64 },
    #[error("problem `{0}` has no exact solution")]
    MissingExactSolution(String),
    #[error("mixed residual check failed on level {level}: r1 = {r1:e}, r2 = {r2:e}, scale = {scale:e}")]
    ResidualCheck { level: usize, r1: f64, r2: f64, scale: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
