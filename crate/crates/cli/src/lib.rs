//! Command-line front end for string-duplication systems: seeded
//! simulation, exact rate-matrix analysis, entropy bounds, and a frozen
//! verification corpus.
//!
//! The binary is a thin wrapper over this library so that integration
//! tests can drive every command in-process.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod csvio;
pub mod error;

pub use commands::{cmd_analyze, cmd_entropy, cmd_simulate, cmd_verify, run_repro_case};
pub use config::ExperimentConfig;
pub use error::{CliError, Result};
