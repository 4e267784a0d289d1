use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's contract.
    #[error("invalid input: {0}")]
    Input(String),
    /// A problem exceeds a configured size cap.
    #[error("{what} is {actual}, above the cap of {cap} (raise `{knob}` to allow it)")]
    Size {
        what: &'static str,
        actual: usize,
        cap: usize,
        knob: &'static str,
    },
    /// An iterative method did not converge within its budget.
    #[error("{method} did not converge (residuals {residuals:?})")]
    Numerical { method: &'static str, residuals: Vec<f64> },
    /// An internal invariant was broken; indicates a bug or corrupt input.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// The instance generator could not produce an instance for this seed.
    #[error("generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
