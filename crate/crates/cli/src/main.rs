mod cli;
mod cmd;
mod error;
mod model_file;
mod output;

use std::io::Write;

use clap::Parser;

use crate::cli::{Cli, Command, Mode};
use crate::cmd::{Outcome, Settings};
use crate::error::CliError;
use crate::output::Format;

fn main() {
    let cli = Cli::parse();
    let settings = Settings {
        format: Format {
            precision: cli.precision,
        },
        tol: cli.tol,
    };
    let code = match dispatch(&cli, &settings).and_then(|out| emit(&cli, out)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: &Cli, s: &Settings) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate { file } => cmd::validate(s, file),
        Command::Interpret { file } => cmd::interpret(s, file),
        Command::Marginal { file, keep } => cmd::marginal(s, file, keep),
        Command::Disintegrate { file, split } => cmd::disintegrate(s, file, split),
        Command::Comb { file, grouping } => cmd::comb(s, file, grouping),
        Command::Factorize { file, target } => cmd::factorize(file, target),
        Command::Intervene { file, target, mode } => {
            cmd::intervene(s, file, target, *mode == Mode::Oracle)
        }
        Command::Randcheck {
            seed,
            count,
            max_nodes,
        } => cmd::randcheck(s, *seed, *count, *max_nodes),
    }
}

fn emit(cli: &Cli, out: Outcome) -> Result<i32, CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, &out.document).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout.write_all(out.document.as_bytes());
        }
    }
    Ok(out.code)
}
