use thiserror::Error;

/// Errors raised by the series, operator, transform and quadrature layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("center mismatch: expected {expected}, found {found}")]
    CenterMismatch { expected: f64, found: f64 },

    #[error("series failed the convergence test at t = {t} (last term {last_term:e}, partial sum {partial_sum:e})")]
    Divergence {
        t: f64,
        last_term: f64,
        partial_sum: f64,
    },

    #[error("transform is singular: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("quadrature did not converge after {nodes} nodes (estimate {estimate:e})")]
    NonConvergence { nodes: usize, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, FracError>;
