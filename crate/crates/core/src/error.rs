use thiserror::Error;

use crate::trigring::HalfInt;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what}: argument {value} outside the admissible domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("integral of s^{a} c^{b} over (0, π) diverges")]
    Divergent { a: HalfInt, b: HalfInt },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Two independent routes to the same quantity disagreed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
