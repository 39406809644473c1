//! Exact symbolic engine for the Gelfand-Dickey hierarchy and its generalized BGW tau-function.

pub mod algebra;
pub mod bgw;
pub mod cli;
pub mod error;
pub mod hierarchy;
pub mod params;
pub mod psido;
pub mod wconstraints;

pub use error::{Error, Result};
