use thiserror::Error;

/// Errors raised by the exact-arithmetic layer and the recursions built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("inexact division, remainder {remainder}")]
    NotDivisible { remainder: String },

    #[error("denominator constant term {0} is not a unit of the Laurent ring")]
    NonMonomialDenominator(String),

    #[error("diagonal limit diverges")]
    DivergentDiagonal,

    #[error("unstable (g, n) = ({g}, {n}): need 2g - 2 + n > 0")]
    Unstable { g: usize, n: usize },

    #[error("invalid insertion {0}: insertions must be at least 1")]
    InvalidInsertion(u32),

    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),

    #[error("value {0} does not lie in Q[t, 1/t]")]
    NotTPolynomial(String),

    #[error("series operation needs {0}")]
    Series(&'static str),

    #[error("spectral curve check failed: {0}")]
    Curve(String),

    #[error("special deformation did not converge: {0}")]
    NoConvergence(String),

    #[error("independent derivations disagree: {0}")]
    Mismatch(String),

    #[error("not in the span of the basis: {0}")]
    OutsideBasis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
