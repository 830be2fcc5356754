use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The underlying real dimension must be 2m with m >= 2.
    #[error("dimension {dim} violates the hypothesis dim = 2m with m >= 2")]
    Hypothesis { dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate plane: Gram determinant {gram_det:e}")]
    DegeneratePlane { gram_det: f64 },

    #[error("inadmissible pair: {what} (residual {residual:e})")]
    Inadmissible { what: &'static str, residual: f64 },

    #[error("angle {theta} outside the admissible range {range}")]
    AngleOutOfRange { theta: f64, range: &'static str },

    #[error("expected a unit vector, got norm {norm}")]
    NonUnit { norm: f64 },

    #[error("metric and complex structure are incompatible (residual {residual:e})")]
    Incompatible { residual: f64 },

    #[error("point {index} is not a real space form (defect {defect:e})")]
    NotSpaceForm { index: usize, defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("metric is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    IndefiniteMetric { min_eigenvalue: f64 },

    #[error("chart has no almost complex structure")]
    MissingStructure,

    #[error("vector is not normal to the patch (tangential residual {residual:e})")]
    NonNormal { residual: f64 },

    #[error("vector is not tangent to the patch (normal residual {residual:e})")]
    NonTangent { residual: f64 },

    #[error("immersion is rank deficient (smallest singular value {singular_value:e})")]
    RankDeficient { singular_value: f64 },

    #[error("unknown space '{0}'")]
    UnknownSpace(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
