use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} out of range: {reason}")]
    OutOfRange { value: u64, reason: &'static str },

    #[error("{a} is not invertible modulo {n}")]
    NotInvertible { a: i64, n: u64 },

    #[error("sign vectors have different moduli ({left} vs {right})")]
    LengthMismatch { left: u64, right: u64 },

    #[error("operation requires a prime modulus, got {0}")]
    CompositeModulus(u64),

    #[error("frequency is divisible by the modulus {0}")]
    ZeroFrequency(u64),

    #[error("frequency {l} is degenerate for ratio {r}/{n} (n divides l*r)")]
    DegenerateFrequency { l: i64, r: u64, n: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid shift query: {0}")]
    InvalidQuery(String),

    #[error("residue class prediction is only defined for odd primes (got p = 2)")]
    EvenPrimeUnsupported,

    #[error("root finding failed for degree {degree} in bracket [{lo}, {hi}]")]
    ConvergenceFailure { degree: usize, lo: f64, hi: f64 },

    #[error("cannot render an empty table")]
    EmptyTable,

    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}
