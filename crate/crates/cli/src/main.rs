use std::process::ExitCode;

use clap::Parser;

mod args;
mod cmd;
mod common;
mod error;

use args::{Cli, Command};
use error::{CliError, CliResult};

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(CliError::runtime)?;
    }
    match &cli.command {
        Command::Global(a) => cmd::global::run(a),
        Command::Local(a) => cmd::local::run(a),
        Command::Bivar(a) => cmd::bivar::run(a),
        Command::Correlogram(a) => cmd::correlogram::run(a),
        Command::Scatter(a) => cmd::scatter::run(a),
        Command::Synth(a) => cmd::synth::run(a),
        Command::Wiki(a) => cmd::wiki::run(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
