//! Exact Newton-Puiseux analysis of plane curve singularities.

pub mod algebra;
pub mod error;
pub mod expansion;
pub mod polygon;
pub mod series;
pub mod stability;
pub mod truncation;

pub use error::{Error, Result};
