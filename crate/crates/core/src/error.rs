use thiserror::Error;

/// Errors raised while setting up or solving a discrete Helmholtz problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("points-per-wavelength guard violated: |k|h = {kh:.4} must be below {limit:.4}")]
    PointsPerWavelength { kh: f64, limit: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("source model is missing derivative {order:?} required by {needed_by}")]
    MissingDerivative {
        order: [usize; 3],
        needed_by: &'static str,
    },

    #[error("boundary data on face {face} is missing tangential derivative {order:?}")]
    MissingFaceDerivative { face: String, order: [usize; 2] },

    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("resonance: preconditioner pencil for lateral mode ({m}, {n}) is singular at row {row}")]
    Resonance { m: usize, n: usize, row: usize },

    #[error("dense oracle size guard exceeded: {unknowns} unknowns (limit {limit})")]
    SizeGuard { unknowns: usize, limit: usize },

    #[error("singular dense matrix")]
    Singular,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
