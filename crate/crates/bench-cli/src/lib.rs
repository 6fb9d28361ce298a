//! `aesgrid`: file encryption and throughput measurement over the
//! grid dispatch engine.
//!
//! Two subcommands: `crypt` runs one mode over a file, `bench` sweeps
//! mode/direction/key-size/backend/size configurations and emits CSV
//! rows with a throughput figure and the engine's copy/kernel time
//! split.

pub mod bench;
pub mod cli;
pub mod crypt;
pub mod data;

use clap::error::ErrorKind;
use clap::Parser;
use std::ffi::OsString;

pub use cli::{BenchArgs, Cli, Command, CryptArgs};

/// Exit status: 0 success, 1 runtime failure (I/O, padding,
/// verification), 2 usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Crypt(args) => crypt::cmd_crypt(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
    }
}
