//! `brainb`: headless runs, the live session server, cohort analysis and
//! trace replay.

mod analyze;
mod artifacts;
mod replay;
mod run;
mod serve;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tracing_subscriber::EnvFilter;

use settings::UsageError;

#[derive(Parser, Debug)]
#[command(name = "brainb", version, about = "Adaptive visual-complexity tracking benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run simulated sessions and write their logs.
    Run(run::RunArgs),
    /// Serve one live session to a browser client.
    Serve(serve::ServeArgs),
    /// Aggregate a directory of logs into cohort CSVs.
    Analyze(analyze::AnalyzeArgs),
    /// Re-execute a pointer trace and compare with its log.
    Replay(replay::ReplayArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();

    let outcome = match cli.command {
        Command::Run(args) => run::cmd_run(&args),
        Command::Serve(args) => serve::cmd_serve(&args),
        Command::Analyze(args) => analyze::cmd_analyze(&args),
        Command::Replay(args) => replay::cmd_replay(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
