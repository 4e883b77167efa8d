//! Lower bounds for the constants of the polynomial and multilinear
//! Bohnenblust-Hille inequalities.

pub mod bounds;
pub mod constants;
pub mod error;
pub mod families;
pub mod multilinear;
pub mod numeric;
pub mod poly;
pub mod report;
pub mod supnorm;

pub use error::{Error, Result};
