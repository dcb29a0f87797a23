//! Command implementations behind the `l2link` binary.
//!
//! Inputs and reports are JSON. Polynomial entries are strings in the grammar
//! of [`l2link::scalars::parse_laurent`] and exact rationals are strings.

pub mod commands;
pub mod error;
pub mod generate;
pub mod input;
pub mod report;

pub use commands::{GenerateRequest, Options, Outcome};
pub use error::CliError;
pub use input::Source;
