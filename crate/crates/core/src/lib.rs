//! Explicit error bounds for Jacobi-family spectral expansions and
//! Gegenbauer–Gauss quadrature of functions analytic inside a Bernstein ellipse.

// `!(x > c)` is used on purpose: it also rejects NaN. Reference values keep
// all the digits they were computed with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod coeffbounds;
pub mod ellipse;
pub mod error;
pub mod expand;
pub mod figures;
pub mod gammafn;
pub mod orthopoly;
pub mod quadrature;
pub mod sigma;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use orthopoly::JacobiIndex;
/// Re-exported so callers share the complex type used in signatures.
pub use num_complex;
