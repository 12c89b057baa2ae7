//! Command implementations behind the `gotobi` binary.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;

use clap::Parser;

pub use args::Cli;
pub use error::CliError;

use args::Command;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Calendar(a) => commands::cmd_calendar(a).map(drop),
        Command::Generate(a) => commands::cmd_generate(a).map(drop),
        Command::Analyze(a) => commands::cmd_analyze(a).map(drop),
        Command::Backtest(a) => commands::cmd_backtest(a).map(drop),
    }
}

/// Parses `argv` and runs it, returning the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { error::EXIT_USAGE } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
