//! Command-line front end for `latcomb`.
//!
//! Every subcommand is a thin binding over a library operation applied to
//! files: utterance archives are processed on a worker pool and written back
//! in input order, so the output never depends on `--jobs`.
//!
//! Exit status: 0 on success, 1 when some utterances failed (the others are
//! still written unless `--fail-fast` is given), 2 on usage, I/O or
//! whole-input errors such as mismatched utterance ids.

mod args;
mod batch;
mod commands;
mod files;
mod report;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};

/// Outcome of a subcommand that ran to completion.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub failed_utterances: usize,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        if self.failed_utterances > 0 {
            1
        } else {
            0
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand, returning the
/// process exit status. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

/// Runs an already parsed command line.
pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let pool = batch::Pool::new(cli.jobs, cli.fail_fast)?;
    commands::dispatch(&cli.command, &pool)
}
