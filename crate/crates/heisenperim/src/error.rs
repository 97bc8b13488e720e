use thiserror::Error;

/// Errors raised by constructors and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("open mesh: {0} boundary or non-manifold edges")]
    OpenMesh(usize),
    #[error("resolution {0} too coarse (minimum {1})")]
    ResolutionTooCoarse(usize, usize),
    #[error("non-finite integrand at ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("characteristic point: projected normal vanishes")]
    Characteristic,
    #[error("refinement did not converge: {0}")]
    NotConverged(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
