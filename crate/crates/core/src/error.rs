use thiserror::Error;

/// Errors raised by the capacity model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a precondition.
    #[error("domain error: {0}")]
    Domain(&'static str),
    /// Operand shapes do not line up.
    #[error("dimension mismatch in {op}: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        op: &'static str,
        expected: (usize, usize),
        actual: (usize, usize),
    },
    /// An iterative kernel hit its iteration cap.
    #[error("{kernel} did not converge after {iterations} iterations")]
    NonConvergence { kernel: &'static str, iterations: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
