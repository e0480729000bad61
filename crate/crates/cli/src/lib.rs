//! Command-line front end for the `hspatch` kernel: patch-set documents, the
//! Bézier teapot format and the command implementations behind the `hspatch`
//! binary.

pub mod commands;
pub mod document;
pub mod error;
pub mod teapot;

pub use commands::{run, Cli, Outcome};
pub use error::{CliError, ParseError};
