mod args;
mod backend;
mod commands;
mod error;
mod render;
mod repl;
mod settings;

use std::io;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use backend::Backend;
use error::CliError;
use settings::Settings;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let settings = Settings::resolve(cli.config.as_deref(), &cli.overrides)?;
    if !matches!(cli.command, Command::Trace(_)) {
        settings.echo();
    }
    match &cli.command {
        Command::Index(a) => commands::index(a, &settings),
        Command::Run(a) => commands::run(a, &settings),
        Command::Eval(a) => commands::eval(a, &settings),
        Command::Trace(a) => commands::trace(a),
        Command::Census(a) => commands::census(a, &settings),
        Command::Repl(a) => {
            let backend = Backend::open(&a.backend, &settings.file, &settings.config)?;
            let stdin = io::stdin();
            repl::run(stdin.lock(), &mut io::stdout(), &backend, &settings.config, a.k)?;
            Ok(())
        }
    }
}
