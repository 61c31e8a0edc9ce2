//! Riemann-Liouville and Caputo operators on Taylor data, fractional Leibniz
//! rules, Laplace transforms of fractional operators, and a quadrature oracle
//! for cross-checking them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod funcspec;
pub mod laplace;
pub mod leibniz;
pub mod operators;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod worked;

pub use error::{FracError, Result};
pub use funcspec::FuncSpec;
pub use series::{EvalResult, FracPowerSeries, Order, TaylorSeries};
