//! Perturbations of plane-wave solutions of the timelike minimal surface equation:
//! numerical evolution in `3+1` dimensions, hyperboloidal energy diagnostics, an exact
//! calculus for weighted boost/translation operators, and a symbolic rate ledger for
//! the bootstrap hierarchy.

pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod ledger;
pub mod models;
pub mod run;
pub mod weight_algebra;

pub use error::{ConfigError, DiagnosticsError, GeometryError, GridError, LedgerError, ModelError, RunError};
