//! Command-line driver for the `quasiortho` experiments: argument parsing,
//! report formats, spectrum and model files.
//!
//! Exit codes: 0 pass, 1 statistical test failed, 2 usage, 3 resource or IO.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;

pub use commands::run;
pub use error::CliError;
