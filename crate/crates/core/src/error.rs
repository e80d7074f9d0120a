use thiserror::Error;

use crate::lattice::LightCoord;

pub type Result<T> = std::result::Result<T, LatticeError>;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("write outside field window at (r={}, l={}) with amplitude {amplitude:.3e}", coord.r, coord.l)]
    WindowOverflow { coord: LightCoord, amplitude: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not unitary (defect {defect:.3e}): {what}")]
    NonUnitary { what: String, defect: f64 },

    #[error("brickwork needs an even number of wires, got {0}")]
    OddWireCount(usize),

    #[error("cell ({i}, {j}) lies outside the {alpha}x{beta} patch")]
    PatchIndex { i: usize, j: usize, alpha: usize, beta: usize },

    #[error("unknown encoding kind `{0}`")]
    UnknownEncoding(String),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("no parameter map given for the transform")]
    MissingMassMap,

    #[error(
        "wires of patch at (r={}, l={}) leave the encoding subspace by {deviation:.3e}",
        coord.r, coord.l
    )]
    SubspaceViolation { coord: LightCoord, deviation: f64 },

    #[error(
        "non-homogeneous transform needs a parameter map independent of (alpha, beta); \
         model `{model}` maps its parameters differently on every patch"
    )]
    FrameDependentParameters { model: String },

    #[error("observer trajectory is empty")]
    EmptyTrajectory,

    #[error("steps ({n}, {}) are not an R/L pair", n + 1)]
    InvalidSwap { n: i64 },

    #[error("field support reaches the surface tail at step {n}; widen the explicit window")]
    SupportEscapesSurface { n: i64 },

    #[error("local density vanishes at (r={}, l={})", coord.r, coord.l)]
    ZeroDensity { coord: LightCoord },

    #[error("layer t={0} is empty")]
    EmptyLayer(i64),

    #[error("need at least {needed} complete time layers, field has {available}")]
    InsufficientLayers { needed: usize, available: usize },

    #[error("det(C) = {0} differs from 1")]
    DeterminantNotOne(num_complex::Complex64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
