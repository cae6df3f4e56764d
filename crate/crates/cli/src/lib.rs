//! Command implementations behind the `tightbell` binary.

pub mod commands;
pub mod error;
pub mod io;

pub use commands::{
    cmd_conditions, cmd_enumerate, cmd_tighten, cmd_verify, cmd_violate, Outcome, RunConfig,
};
pub use error::{CliError, Result};
