//! Monthly time-series econometrics toolkit.

pub mod corpus;
pub mod diagnostics;
pub mod error;
pub mod inference;
pub mod report;
pub mod series;
pub mod stationarity;
pub mod stats;
pub mod var;

pub use error::{Error, Result};
