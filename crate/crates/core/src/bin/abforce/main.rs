//! `abforce`: evaluate the semi-classical force model from the command line.
//!
//! Exit status: 0 success, 1 I/O error, 2 usage error, 3 domain error,
//! 4 integrator convergence failure.

mod args;
mod commands;
mod params;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use report::{CliError, Sink};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("abforce: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => Some(params::load_config(path, cli.command.name())?),
        None => None,
    };
    let timestamp = (!cli.no_timestamp)
        .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let sink = |default: Format| Sink {
        format: cli.format.unwrap_or(default),
        out: cli.out.clone(),
        timestamp: timestamp.clone(),
    };
    let config = config.as_ref();
    match &cli.command {
        Command::Analytic(p) => {
            let p = params::merge(p, config)?;
            commands::analytic(p)?.write(&sink(Format::Json))
        }
        Command::Trajectory(p) => {
            let p = params::merge(p, config)?;
            commands::trajectory(p, &sink(Format::Csv))
        }
        Command::Table1(p) => {
            let p = params::merge(p, config)?;
            commands::table1(p)?.write(&sink(Format::Csv))
        }
        Command::Regimes(p) => {
            let p = params::merge(p, config)?;
            commands::regimes(p)?.write(&sink(Format::Json))
        }
        Command::Sweep(p) => {
            let p = params::merge(p, config)?;
            commands::sweep(p)?.write(&sink(Format::Csv))
        }
    }
}
