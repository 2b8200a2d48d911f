//! Command-line front end for `hscorr`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 validation error, 4 I/O error.

pub mod commands;
pub mod format;

pub use commands::{run, CliError};
