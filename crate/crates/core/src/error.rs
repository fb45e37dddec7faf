use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    /// Point lies outside the admissible chart domain.
    #[error("point outside chart domain: {0}")]
    Domain(String),

    /// Matrix too close to singular (condition estimate above the cutoff).
    #[error("numerically degenerate matrix (condition estimate {condition:.3e})")]
    Degenerate { condition: f64 },

    #[error("vectors do not span a plane")]
    DegeneratePlane,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("too many variables for jet arithmetic: {0} (max {max})", max = crate::jet::MAX_VARS)]
    TooManyVariables(usize),
}

pub type Result<T> = std::result::Result<T, GeomError>;
