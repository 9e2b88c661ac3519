use thiserror::Error;

/// Errors shared by all subsystems. Variants mirror the failure modes named
/// in the operation contracts (constraint violations, degenerate stencils,
/// mesh collapse, ...).
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("point violates the {space} constraints (residual {residual:.3e})")]
    ConstraintViolation { space: String, residual: f64 },

    #[error("stencil error: {0}")]
    StencilError(String),

    #[error("geodesic integration failed: {0}")]
    IntegrationError(String),

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("degenerate neighborhood at vertex {vertex}: {reason}")]
    DegenerateNeighborhood { vertex: usize, reason: String },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh collapse: {0}")]
    MeshCollapse(String),

    #[error("time step {dt:.6e} exceeds the stability bound {bound:.6e}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("immersion is not fiber invariant: {0}")]
    NotInvariant(String),

    #[error("verification gate failed: {0}")]
    GateFailed(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GeomError>;
