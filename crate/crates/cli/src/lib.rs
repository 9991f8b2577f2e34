//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! outcomes to exit codes: 0 success, 2 rejected decapsulation, 1 any other
//! failure. Diagnostics go to standard error.

mod args;
mod commands;
mod error;
mod fsio;
mod presets;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use error::{CliError, CliResult};
pub use presets::PRESET_DIR_ENV;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

/// What a successful command reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Rejected,
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Rejected) => EXIT_REJECTED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
