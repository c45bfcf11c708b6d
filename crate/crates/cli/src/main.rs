mod args;
mod error;
mod inputs;
mod output;
mod run;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;
use crate::run::Execution;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run::execute(&cli) {
        Ok(Execution::Record(mut command_output)) => {
            let duration_ms = started.elapsed().as_secs_f64() * 1e3;
            let rendered = output::render_record(&mut command_output, cli.format, duration_ms);
            match output::write_artifacts(
                &rendered,
                cli.output.as_ref(),
                &command_output.extra_files,
            ) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Ok(Execution::Table(table)) => {
            match output::write_artifacts(&table, cli.output.as_ref(), &[]) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e),
            }
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}
