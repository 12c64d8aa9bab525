use thiserror::Error;

/// Errors raised by the numerical routines and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {value} outside [-1, 1] for {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("theta series diverges: Im(tau) = {im_tau} must be positive")]
    Divergence { im_tau: f64 },

    #[error(
        "invalid regime: {what} needs Re z > 0 (got Re z = {re_z}); \
         exp(z|x|^2 Laplacian) is bounded iff Re z >= 0 and unitary iff Re z = 0, \
         so use the spectral route for Re z = 0"
    )]
    InvalidRegime { what: &'static str, re_z: f64 },

    #[error("unbounded exponent: {0}")]
    Unbounded(String),

    #[error("scaling parameter t = {t} is not aligned with the grid: 2t/ds = {steps} is not an integer")]
    Misaligned { t: f64, steps: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for mathematical regime errors,
    /// 3 for I/O and parse failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
