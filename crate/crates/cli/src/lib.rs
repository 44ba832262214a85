//! Command-line front end for the `isingtsp` solver: `solve`, `bench` and
//! `oracle`.
//!
//! Exit codes are 0 on success, 2 for unreadable or malformed input, 3 when
//! solving or writing results fails and 64 for usage errors.

pub mod args;
pub mod bench;
pub mod config;
pub mod error;
pub mod oracle;
pub mod report;
pub mod solve;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use crate::args::{Cli, Command};
pub use crate::error::{exit, CliError};

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    exit::OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    exit::USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve::cmd_solve(a, out, err),
        Command::Bench(a) => bench::cmd_bench(a, out),
        Command::Oracle(a) => oracle::cmd_oracle(a, out),
    };
    match result {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}
