use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("function domain violated: {0}")]
    DomainError(String),

    #[error("relations violated: {0}")]
    RelationViolation(String),

    #[error("pair is not reducible to common part plus projections: {0}")]
    NotReducible(String),

    #[error("trace difference {value} is not near an integer")]
    NotNearInteger { value: f64 },

    #[error("matrix is not a projection (defect {defect:.3e})")]
    NotAProjection { defect: f64 },

    #[error("constructed element fails the projection identity (defect {defect:.3e})")]
    ProjectionDefect { defect: f64 },

    #[error("bad grid: {0}")]
    BadGrid(String),

    #[error("fields disagree on the gluing region (worst deviation {worst:.3e})")]
    GluingMismatch { worst: f64 },

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("frame overlap near-singular at plaquette {plaquette} (|det| = {det:.3e}); refine the mesh")]
    RankDrop { plaquette: usize, det: f64 },

    #[error("pointwise class is not locally constant: {0}")]
    NotLocallyConstant(String),

    #[error("no spectral matching found: {0}")]
    NoMatching(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
