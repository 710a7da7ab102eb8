mod args;
mod bench;
mod commands;
mod error;
mod io;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliResult;

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Path(a) => commands::run_path(a),
        Command::Grid(a) => commands::run_grid(a),
        Command::Single(a) => commands::run_single(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Exact(a) => commands::run_exact(a),
        Command::Bench(a) => bench::run_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version go to stdout with status 0
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("pprpaths: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
