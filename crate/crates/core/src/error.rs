use thiserror::Error;

/// Errors produced by the geometry and representation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected a unit vector, norm is {norm}")]
    NotUnit { norm: f64 },

    #[error("basis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("bivector reconstruction residual {residual:e} exceeds tolerance")]
    Reconstruction { residual: f64 },

    #[error("point lies within {margin:e} of the domain boundary (step {step:e})")]
    NearBoundary { margin: f64, step: f64 },

    #[error("finite-difference step too large: successive estimates {coarse} and {fine} disagree")]
    StepTooLarge { coarse: f64, fine: f64 },

    #[error("map is not distance-decreasing: ratio {ratio} on a sampled pair")]
    NotDistanceDecreasing { ratio: f64 },

    #[error("classifier needs a constant circular ellipse field: {0}")]
    ClassifierPrecondition(String),

    #[error("imaginary part of the indicator mean {imag:e} exceeds 5 standard errors ({stderr:e})")]
    ImaginarySanity { imag: f64, stderr: f64 },

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("unsupported representation {rep} for group {group}")]
    UnsupportedRepresentation { group: String, rep: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
