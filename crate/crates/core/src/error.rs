use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("face {face} is degenerate: {reason}")]
    DegenerateFace { face: usize, reason: String },

    #[error("edge {u}-{v} lies in {count} faces, expected 2")]
    EdgeNotInTwoFaces { u: usize, v: usize, count: usize },

    #[error("declared edge list does not match the faces: {0}")]
    EdgeMismatch(String),

    #[error("Euler relation fails: V - E + F = {vertices} - {edges} + {faces} != 2")]
    EulerViolation { vertices: usize, edges: usize, faces: usize },

    #[error("graph is not 3-connected (connectivity {connectivity}, separating set {cutset:?})")]
    NotThreeConnected { connectivity: usize, cutset: Vec<usize> },

    #[error("{what} exceeds budget {limit}")]
    BudgetExceeded { what: String, limit: usize },

    #[error("points do not span dimension {dimension} (affine rank {rank})")]
    DegenerateSpan { dimension: usize, rank: usize },

    #[error("duplicate point or parameter at index {0}")]
    Duplicate(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertex set {0:?} is not a proper face: no supporting hyperplane")]
    InfeasibleSupport(Vec<usize>),

    #[error("point {0} is not outside the ball")]
    PointInsideBall(usize),

    #[error("degenerate cap configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("exact ply depth needs dimension 3, got {0}; use the Monte Carlo lower bound")]
    MonteCarloOnly(usize),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, limit: usize) -> Self {
        Error::BudgetExceeded { what: what.into(), limit }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
