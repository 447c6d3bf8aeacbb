use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: f64 },
    #[error("argument {z} outside the annulus image (-{bound}, {bound})")]
    OutOfAnnulus { z: f64, bound: f64 },
    #[error("derivative of order {requested} requested, capability is {available}")]
    Capability { requested: usize, available: usize },
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("integrand returned a non-finite value at x = {0}")]
    NonFiniteIntegrand(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("limit indistinguishable from zero (estimate {0:e})")]
    ZeroLimit(f64),
    #[error("momentum M_{index} = {value:e} does not vanish")]
    MomentumViolation { index: usize, value: f64 },
    #[error("exponents must be pairwise distinct: {0:?}")]
    NotDistinct(Vec<f64>),
    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
