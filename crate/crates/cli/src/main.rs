mod args;
mod check;
mod maps;
mod numbers;
mod output;
mod walk;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.global.threads {
        set_threads(n)?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Constants(a) => numbers::constants(g, &a),
        Command::Coeffs(a) => numbers::coeffs(g, &a),
        Command::Series(a) => numbers::series(g, &a),
        Command::Laws(a) => numbers::laws(g, &a),
        Command::Sample(a) => walk::sample(g, &a),
        Command::MapSample(a) => maps::map_sample(g, &a),
        Command::MapValidate(a) => maps::map_validate(g, &a),
        Command::MapBall(a) => maps::map_ball(g, &a),
        Command::Verify(a) => check::verify(g, &a),
        Command::Experiment(a) => check::experiment(g, &a),
    }
}

#[cfg(feature = "parallel")]
fn set_threads(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

#[cfg(not(feature = "parallel"))]
fn set_threads(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
