use thiserror::Error;

/// Errors raised by the kinematic, spectral and uncertainty layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("undefined parameter: {0}")]
    UndefinedParameter(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("acceptability violated: {0}")]
    Unacceptable(String),

    #[error("unphysical regime: {0}")]
    Unphysical(String),

    #[error("invalid quantum numbers (n={n}, tau={tau}): n runs over 0,1,2,... for tau=+1 and 1,2,... for tau=-1")]
    InvalidQuantumNumber { n: u64, tau: i8 },

    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    #[error("eigensolver did not converge under grid refinement:\n{log}")]
    NonConvergence { log: String },

    #[error("state is not normalized (norm = {0})")]
    Unnormalized(f64),

    #[error("non-antisymmetric transformation parameters at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
