use crate::C64;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(C64),
    #[error("truncated power 0^w is singular for w = {0}")]
    SingularAtZero(C64),
    #[error("endpoint exponent {0} is not integrable (needs Re > -1)")]
    NonIntegrable(C64),
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
    #[error("invalid order {value}: {reason}")]
    InvalidOrder { value: C64, reason: &'static str },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("tail beyond window {window} is not negligible")]
    TailNotNegligible { window: f64 },
    #[error("test function does not provide derivative of order {0}")]
    MissingDerivative(u32),
    #[error("series did not decay within {0} terms")]
    NoDecay(usize),
    #[error("log singularity of the symbol at omega = {0}")]
    LogSingularity(f64),
    #[error("exponential spline parameter a = {0} must be nonnegative")]
    NegativeA(f64),
    #[error("dimension {0} exceeds the quadrature limit")]
    DimensionTooHigh(usize),
    #[error("evaluation point hits lattice point n = {0}")]
    LatticePointSingularity(usize),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid knots: {0}")]
    InvalidKnots(String),
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
