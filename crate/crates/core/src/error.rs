use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A qubit, dimension or tensor slot does not fit the state layout.
    #[error("layout error: {0}")]
    Layout(String),

    /// An input violated an operation precondition (normalization, hermiticity, ...).
    #[error("contract violated: {0}")]
    Contract(String),

    /// A forced projection landed on a branch with zero norm.
    #[error("projection onto outcome {outcome:+} has zero norm")]
    ProjectionEmpty { outcome: i8 },

    /// The tracking rescaling `-sqrt(3)/sin(2 theta)` diverges.
    #[error("tracking observable undefined at theta = {theta} (|sin 2theta| = {sin_2theta:e})")]
    SingularScaling { theta: f64, sin_2theta: f64 },

    /// The two terms of an entangled input cancel.
    #[error("degenerate input: assembled norm {norm:e} before normalization")]
    DegenerateInput { norm: f64 },

    /// A branch that the interaction forbids was reached.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
