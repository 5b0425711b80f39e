mod args;
mod error;
mod output;
mod score;
mod tables;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliResult;
use output::Sink;

fn run(cli: &Cli) -> CliResult<()> {
    let mut sink = Sink::open(cli.output.as_deref())?;
    match &cli.command {
        Command::Score(a) => score::run(a, cli.seed, cli.format, &mut sink)?,
        Command::Ner(a) => tables::ner(a, cli.format, &mut sink)?,
        Command::Regress(a) => tables::regress(a, cli.format, &mut sink)?,
        Command::Predict(a) => tables::predict(a, cli.format, &mut sink)?,
        Command::Fixture(a) => tables::fixture(a, &mut sink)?,
    }
    sink.finish()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("respeak: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
