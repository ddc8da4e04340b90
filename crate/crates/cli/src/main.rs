mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use config::RunConfig;
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {threads} threads: {e}")))?;
    }
    let doc = commands::run(&cli.command, &cfg)?;
    output::emit(&doc.render(cfg.format, cfg.digits), cfg.out.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with code 2 on usage errors.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spindiscord: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
