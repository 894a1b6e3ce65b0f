use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at {0}")]
    Pole(Complex64),

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("{what} did not converge (best estimate {estimate}, achieved error {achieved_error:e})")]
    Convergence {
        what: &'static str,
        estimate: Complex64,
        achieved_error: f64,
    },

    #[error("s = {s} is not a completely bounded multiplier for m = {m}")]
    NotAMultiplier { s: Complex64, m: u32 },

    #[error("Lorentz matrix invariant violated: {0}")]
    Invariant(String),

    #[error("enumeration needs {requested} elements, cap is {cap}")]
    Capacity { requested: u64, cap: u64 },

    #[error("result needs radius {needed}, configured ball radius is {radius}")]
    Overflow { needed: usize, radius: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
