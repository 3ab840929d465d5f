use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// First vertex pair whose local counts disagree with the reference pair at
/// the same distance.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegularityWitness {
    pub h: usize,
    pub i: usize,
    pub j: usize,
    pub x: usize,
    pub y: usize,
    /// |Γ_i(x) ∩ Γ_j(y)| at the first pair seen at distance h.
    pub expected: u64,
    pub found: u64,
}

impl fmt::Display for RegularityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|Γ_{}({}) ∩ Γ_{}({})| = {} but {} for another pair at distance {}",
            self.i, self.x, self.j, self.y, self.found, self.expected, self.h
        )
    }
}

/// Edge-list ingestion failure, located by file and line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub path: Option<PathBuf>,
    /// 1-based line number; 0 when the problem is not tied to a line.
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let file = self
            .path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "<input>".to_string());
        if self.line > 0 {
            write!(f, "{}:{}: {}", file, self.line, self.reason)
        } else {
            write!(f, "{}: {}", file, self.reason)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: vertex {y} is unreachable from vertex {x}")]
    DisconnectedGraph { x: usize, y: usize },

    #[error("graph is not distance-regular: {0}")]
    NotDistanceRegular(RegularityWitness),

    #[error("diameter {diameter} is too small, at least 2 is required")]
    DiameterTooSmall { diameter: usize },

    #[error("invalid family parameters: {0}")]
    InvalidFamilyParams(String),

    #[error("graph would have {vertices} vertices, above the limit of {limit}")]
    TooManyVertices { vertices: usize, limit: usize },

    #[error("tridiagonal eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("eigenvalues {i} and {j} coincide within tolerance (gap {gap:e})")]
    DegenerateSpectrum { i: usize, j: usize, gap: f64 },

    #[error("idempotent relation E_{i} E_{j} violated (residual {residual:e})")]
    IdempotencyViolation { i: usize, j: usize, residual: f64 },

    #[error("trace of E_{index} is {trace}, not within tolerance of a positive integer")]
    NonIntegralMultiplicity { index: usize, trace: f64 },

    #[error("matrix is not constant on distance class {distance} (deviation {deviation:e})")]
    NotConstantOnDistanceClasses { distance: usize, deviation: f64 },

    #[error("dual eigenvalues {i} and {j} coincide within tolerance")]
    DegenerateDualSpectrum { i: usize, j: usize },

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(&'static str),

    #[error("vector does not lie in the eigenspace (residual {residual:e})")]
    InputNotInEigenspace { residual: f64 },

    #[error("operation requires distinct vertices, got {0} twice")]
    SameVertex(usize),

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
