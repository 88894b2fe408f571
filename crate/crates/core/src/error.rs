use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Error)]
pub enum KfgError {
    #[error("insufficient points for boundary stencil (need at least {needed}, got {got})")]
    GridTooSmall { needed: usize, got: usize },

    #[error("grid mismatch: fields sampled on {left} points vs {right} points")]
    GridMismatch { left: usize, right: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("boundary matrix not unitary (deviation {deviation:.3e} exceeds {tolerance:.3e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("lambda must be positive and finite (got {0})")]
    InvalidLambda(f64),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("non-real current: imaginary residue {0:.3e} above tolerance")]
    NonRealCurrent(f64),

    #[error("boundary-term forms disagree by {0:.3e}; projector identity violated")]
    BoundaryFormMismatch(f64),

    #[error("numerical blow-up detected at step {step}")]
    NumericalBlowup { step: usize },

    #[error("eigensolver failure: {0}")]
    EigensolverFailure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, KfgError>;
