use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("origin is not an interior point of the body")]
    OriginNotInterior,
    #[error("measure `{0}` has no radial profile")]
    MissingRadialProfile(String),
    #[error("body is not C2+ (curvature must be positive): {0}")]
    NotSmooth(String),
    #[error("inadmissible pairing: {0}")]
    Inadmissible(String),
    #[error("extrapolation did not converge: residual {residual:e} above target {target:e}")]
    NonConvergent { residual: f64, target: f64 },
    #[error("negative discriminant {0:e} in the s-concave bracket")]
    NegativeDiscriminant(f64),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
