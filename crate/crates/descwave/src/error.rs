//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors reported by the numerical pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation that requires a square matrix received a rectangular one.
    NotSquare { rows: usize, cols: usize },
    /// Operand dimensions do not agree.
    DimensionMismatch(String),
    /// Input contains NaN or infinite entries.
    NonFinite,
    /// A matrix expected to be invertible is numerically singular.
    Singular(String),
    /// An iterative or direct algorithm failed to reach its tolerance.
    NumericalFailure(String),
    /// No shift in the candidate list makes `gamma E + A` invertible.
    SingularPencil,
    /// Boundary parameters hit an excluded denominator (`alpha N = 1` or
    /// `beta N = -1`).
    DegenerateBoundary(String),
    /// The matrix index exceeds what the operation supports.
    IndexTooHigh { index: usize },
    /// A documented precondition does not hold for the given input.
    Precondition(String),
    /// A solvability hypothesis of the discrete problem is violated.
    HypothesisViolation(String),
    /// Time stepping hit an inconsistent singular system at step `j`.
    InconsistentStep { j: usize, detail: String },
    /// A boundary system has no solution at step `j`.
    InfeasibleBoundary { j: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NonFinite => write!(f, "input contains non-finite entries"),
            Error::Singular(msg) => write!(f, "singular matrix: {msg}"),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::SingularPencil => {
                write!(
                    f,
                    "no gamma in the candidate list makes gamma*E + A invertible"
                )
            }
            Error::DegenerateBoundary(msg) => write!(f, "degenerate boundary parameters: {msg}"),
            Error::IndexTooHigh { index } => {
                write!(f, "matrix index {index} exceeds 1; group inverse undefined")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::HypothesisViolation(msg) => write!(f, "hypothesis violation: {msg}"),
            Error::InconsistentStep { j, detail } => {
                write!(f, "inconsistent singular system at time step {j}: {detail}")
            }
            Error::InfeasibleBoundary { j } => {
                write!(f, "boundary system infeasible at time step {j}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
