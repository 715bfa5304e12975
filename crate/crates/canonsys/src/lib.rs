//! File formats, report serialization and the `canonsys` command-line tool for
//! spectral analysis of canonical systems.

pub mod cli;
pub mod error;
pub mod export;
pub mod growth_spec;
pub mod report;
pub mod spec_file;

pub use error::{CliError, Result};
