//! Configured runs: TOML configuration, simulation with diagnostics, output files and
//! rate fits.

pub mod config;
pub mod rates;
pub mod simulate;

pub use config::RunConfig;
pub use rates::{fit_rates, FitReport};
pub use simulate::{simulate, RunOutput, Summary};
