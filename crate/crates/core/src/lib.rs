#![no_std]
// `!(x >= y)` is how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Order estimates for Kolmogorov widths of finite-dimensional balls, intersections of two
//! balls, and the weighted Sobolev classes that discretize onto them.

extern crate alloc;

pub mod ball;
pub mod engine;
pub mod error;
pub mod intersection;
pub mod params;

pub use error::{Error, Result};
pub use params::{Exponent, ExponentParams, OrderValue};
pub mod lattice;
pub mod oracle;
pub mod sobolev;
