//! File formats, the turnover pipeline and the `chdisc` subcommands.

pub mod commands;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod scan;
pub mod svg;

pub use error::{CliError, EXIT_FAIL, EXIT_INVALID, EXIT_OK};
