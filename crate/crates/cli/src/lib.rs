//! Command-line front end wiring the pipeline:
//! decompose -> partition -> { spr | treecover -> oracle } -> verify.
//!
//! Exit codes: 0 ok, 1 verifier failure, 64 usage error, 65 data error.
//! All artifacts are versioned JSON (plus CSV samples and DOT exports)
//! and byte-identical across runs with equal configurations.

mod commands;
mod config;

pub use config::{Cli, Command, Format, OracleAction, VerifyLevel};

use clap::Parser;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

/// Parses `args` and runs the selected command, returning the process
/// exit code.
pub fn run<I, S>(args: I) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not usage errors
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match commands::dispatch(cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFY,
        Err(commands::CmdError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(commands::CmdError::Data(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DATA
        }
    }
}
