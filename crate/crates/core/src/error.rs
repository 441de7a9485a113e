use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Gamma has a pole at {0}")]
    Pole(Complex64),

    /// The requested Cesàro order is outside the regime where the zero sums converge
    /// (or where the explicit formula is proven, when `experimental` is off).
    #[error("k = {k} is outside the supported regime (need k > {min}){hint}")]
    Regime {
        k: f64,
        min: f64,
        hint: &'static str,
    },

    #[error(
        "quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tolerance:e}"
    )]
    Accuracy { estimate: f64, tolerance: f64 },

    #[error(
        "zero table too short: largest ordinate {available} but at least {required} is needed"
    )]
    Truncation { required: f64, available: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Errors caused by malformed input files or failed reads, as opposed to bad parameters.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Io(_))
    }
}
