use thiserror::Error;

/// Errors raised by the strain-set kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not in SL(2): det = {det}")]
    NotSl2 { det: f64 },

    #[error("stretch |Fs| = {norm} is degenerate")]
    DegenerateBeta { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty input")]
    EmptyInput,

    #[error("slip directions are parallel")]
    ParallelSlips,

    #[error("invalid polycrystal: {0}")]
    InvalidPolycrystal(String),

    #[error("shear parameter {0} outside [1 - sqrt(3), sqrt(3) - 1]")]
    GammaOutOfRange(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
