//! Library side of the `bmv` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod instances;
pub mod manifest;
pub mod suites;

pub use commands::{run, Outcome};
