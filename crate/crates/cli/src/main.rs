use std::process::ExitCode;

use clap::Parser;
use harvestkit_cli::commands;
use harvestkit_cli::config::{Cli, Command, Settings};
use harvestkit_cli::error::{CliError, CliResult};
use harvestkit_cli::figures::figure;
use harvestkit_cli::table::{emit, Row};
use harvestkit_cli::verify::verify;

/// Rows to print and whether verification succeeded.
fn dispatch(cli: &Cli) -> CliResult<(Vec<Row>, bool)> {
    let s = Settings::resolve(&cli.opts)?;
    let (rows, ok) = match &cli.command {
        Command::Eval => (commands::eval(&s)?, true),
        Command::Sweep { axes, quantity } => {
            (commands::sweep(&s, axes, quantity.as_deref())?, true)
        }
        Command::Optimize { target } => (commands::optimize(&s, target)?, true),
        Command::Figure { id } => (figure(id, &s)?, true),
        Command::FitCheck => commands::fit_check()?,
        Command::Verify => verify(&s)?,
    };
    emit(&rows, s.format, s.out.as_deref())?;
    Ok((rows, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((_, true)) => ExitCode::SUCCESS,
        Ok((_, false)) => {
            eprintln!("harvestkit: verification failed");
            CliError::Verification(String::new()).exit_code()
        }
        Err(e) => {
            eprintln!("harvestkit: {e}");
            e.exit_code()
        }
    }
}
