//! `qndsim`: self-checks and parameter sweeps for the light-matter QND
//! transfer simulator.

mod args;
mod config;
mod dump;
mod error;
mod output;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::Settings;
use error::CliResult;
use sweep::Swept;

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::VerifyDeterministic(a) => verify::run(&Settings::load(&a)?),
        Command::SweepQ(a) => sweep::run(&Settings::load(&a)?, Swept::Q),
        Command::SweepKappa(a) => sweep::run(&Settings::load(&a)?, Swept::Kappa),
        Command::SweepVa(a) => sweep::run(&Settings::load(&a)?, Swept::Va),
        Command::Dump(a) => dump::run(&Settings::load(&a)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qndsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
