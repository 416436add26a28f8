mod args;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Ctx, Outcome};
use config::JobConfig;
use error::CliError;

fn flags(cmd: &Command) -> Result<serde_json::Value, CliError> {
    Ok(match cmd {
        Command::Limit(a) => serde_json::to_value(a)?,
        Command::Correction(a) => serde_json::to_value(a)?,
        Command::Finite(a) => serde_json::to_value(a)?,
        Command::Simulate(a) => serde_json::to_value(a)?,
        Command::Verify(a) => serde_json::to_value(a)?,
    })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        softedge::par::set_threads(t);
    }
    let cfg = JobConfig::resolve(cli.config.as_deref(), flags(&cli.command)?)?;
    let ctx = Ctx { command: cli.command.name(), threads: cli.threads, cfg: &cfg };
    match cli.command {
        Command::Limit(_) => commands::limit(&ctx),
        Command::Correction(_) => commands::correction(&ctx),
        Command::Finite(_) => commands::finite(&ctx),
        Command::Simulate(_) => commands::simulate(&ctx),
        Command::Verify(_) => commands::verify(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            for line in &o.summary {
                println!("{line}");
            }
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            if o.untrusted.is_empty() {
                ExitCode::SUCCESS
            } else {
                for u in &o.untrusted {
                    eprintln!("warning: {u}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
