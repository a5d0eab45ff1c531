//! Command-line front end: argument and config-file handling, the kernel,
//! scan, converge and selfcheck workflows, and their CSV output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod selfcheck;

pub use args::{Cli, Command};
pub use config::RunConfig;
pub use error::CliError;

/// Runs a parsed command; the error carries the process exit code.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Kernel(args) => {
            commands::cmd_kernel(&RunConfig::resolve(args)?, args.out.as_deref())
        }
        Command::Scan(args) => commands::cmd_scan(&RunConfig::resolve(args)?, args.out.as_deref()),
        Command::Converge(args) => commands::cmd_converge(
            &RunConfig::resolve(&args.run)?,
            &args.ladder,
            args.run.out.as_deref(),
        ),
        Command::Selfcheck(args) => selfcheck::run(args.digits, args.inject_fault.as_deref()),
    }
}
