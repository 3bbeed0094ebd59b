//! Library side of the command line front end: the problem-spec file format,
//! built-in examples, report serialization, and the command implementations.

pub mod examples;
pub mod report;
pub mod runner;
pub mod spec;

/// Process exit codes shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Everything passed.
    Pass = 0,
    /// A solvability hypothesis or a residual threshold failed.
    HypothesisFailure = 1,
    /// The input could not be parsed or is structurally invalid.
    InputError = 2,
    /// A numerical algorithm failed.
    NumericalFailure = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Classify a core error into an exit outcome.
pub fn classify(err: &descwave::Error) -> Outcome {
    use descwave::Error::*;
    match err {
        HypothesisViolation(_)
        | SingularPencil
        | InconsistentStep { .. }
        | InfeasibleBoundary { .. } => Outcome::HypothesisFailure,
        NotSquare { .. }
        | DimensionMismatch(_)
        | NonFinite
        | DegenerateBoundary(_)
        | Precondition(_) => Outcome::InputError,
        NumericalFailure(_) | Singular(_) | IndexTooHigh { .. } => Outcome::NumericalFailure,
    }
}
