//! Dirichlet series with completely multiplicative coefficients, their
//! exponential representations over classical and Beurling prime systems,
//! power-series radius estimation, monotonicity probes, and the numerical
//! checks that accompany nonvanishing arguments on the line `Re s = 1`.

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod beurling;
pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod monotone;
pub mod report;
pub mod verify;
pub mod zerofree;

pub use error::{Error, Result};
