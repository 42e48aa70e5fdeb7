//! Command-line front end for `subgrowth-core`: argument parsing, the
//! number-field table and character-cache file formats, and report rendering.

pub mod cache_file;
pub mod cli;
pub mod commands;
mod error;
pub mod output;
pub mod table;

pub use error::{CliError, EXIT_BOUND_FAILED, EXIT_COMPUTE, EXIT_OK, EXIT_USAGE};
