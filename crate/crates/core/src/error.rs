use core::fmt;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the supported domain (e.g. `Γ(x)` with `x <= 0`).
    Domain(&'static str),
    /// Operands built for different fractal orders were combined.
    OrderMismatch { left: f64, right: f64 },
    /// A problem statement violates its invariants.
    InvalidProblem(&'static str),
    /// Series division by a series whose constant term vanishes.
    ZeroConstantTerm,
    /// An alternating or oscillating series would lose too many digits.
    PrecisionLoss { magnitude: f64 },
    /// A series did not reach its tolerance within the term cap.
    NonConvergence { terms: usize },
    /// The truncation remainder of a series evaluation exceeds the tolerance.
    InsufficientTruncation { remainder: f64 },
    /// A result that must be real carries a significant imaginary part.
    Realness { imaginary: f64 },
    /// A Gamma value needed by the computation overflows `f64`.
    Overflow,
}

impl Error {
    /// True for failures of a numerical guard, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ZeroConstantTerm
                | Error::PrecisionLoss { .. }
                | Error::NonConvergence { .. }
                | Error::InsufficientTruncation { .. }
                | Error::Realness { .. }
                | Error::Overflow
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::OrderMismatch { left, right } => {
                write!(f, "fractal order mismatch: {left} vs {right}")
            }
            Error::InvalidProblem(what) => write!(f, "invalid problem: {what}"),
            Error::ZeroConstantTerm => {
                f.write_str("division by series with zero constant term")
            }
            Error::PrecisionLoss { magnitude } => write!(
                f,
                "precision loss: series argument magnitude {magnitude:.3e} exceeds the cancellation limit"
            ),
            Error::NonConvergence { terms } => {
                write!(f, "series did not converge within {terms} terms")
            }
            Error::InsufficientTruncation { remainder } => write!(
                f,
                "insufficient truncation order (remainder estimate {remainder:.3e})"
            ),
            Error::Realness { imaginary } => write!(
                f,
                "internal consistency error: imaginary part {imaginary:.3e} in a real result"
            ),
            Error::Overflow => f.write_str("gamma ladder overflow"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
