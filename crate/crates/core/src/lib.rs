//! Numerical toolkit for quadratic Weyl sums and their maximal functions.

pub mod arith;
pub mod error;
pub mod format;
pub mod gauss;
pub mod major_arc;
pub mod maximal;
pub mod numeric;
pub mod oracle;
pub mod oscillatory;
pub mod rng;
pub mod scaling;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
