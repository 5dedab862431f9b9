use thiserror::Error;

/// Errors produced by basis construction, assembly, eigensolvers and diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis index {index} out of range 1..={n_basis}")]
    IndexOutOfRange { index: usize, n_basis: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("potential is not finite at r = {r}")]
    SingularPotential { r: f64 },

    #[error("supercritical coupling: Z/c = {coupling} is not below |kappa| = {kappa}")]
    SupercriticalCoupling { coupling: f64, kappa: i32 },

    #[error("no bound state with quantum number {n}")]
    NoSuchBoundState { n: usize },

    #[error("no closed-form spectrum for {0}")]
    NoClosedForm(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigenvalue iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("{0} is not defined for this problem")]
    NotApplicable(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
