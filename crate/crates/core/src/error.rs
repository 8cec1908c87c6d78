//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by space construction, operators, solvers and checks.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The weight evaluated to a non-finite value while building a space.
    #[error("weight is not finite at node {node} (x = {x})")]
    NonFiniteWeight { node: usize, x: f64 },

    /// An operation that needs a strictly positive field found a bad node.
    #[error("{what} requires strictly positive values; node {node} holds {value}")]
    NonPositiveField {
        what: &'static str,
        node: usize,
        value: f64,
    },

    /// Two fields do not live on the same space (identity or length).
    #[error("fields live on different spaces or have mismatched lengths")]
    SpaceMismatch,

    /// An input collection that must be nonempty was empty.
    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    /// A linear or nonlinear solve did not converge.
    #[error("solver failed: {message} (iterations {iterations}, residual {residual:.3e}, step halvings {halvings})")]
    Solver {
        message: String,
        iterations: u32,
        residual: f64,
        halvings: u32,
    },
}

impl Error {
    pub(crate) fn solver(message: impl Into<String>, iterations: u32, residual: f64, halvings: u32) -> Self {
        Error::Solver {
            message: message.into(),
            iterations,
            residual,
            halvings,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
