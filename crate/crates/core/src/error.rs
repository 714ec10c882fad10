use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("degenerate surface: {0}")]
    Degenerate(String),
    #[error("not a singular point (scaled residual {residual:e})")]
    NotSingularPoint { residual: f64 },
    #[error("structure error: {0}")]
    Structure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
