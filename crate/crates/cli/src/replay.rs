use std::path::PathBuf;
use std::process::ExitCode;

use brainb_core::{verify_replay, PointerTrace, ReplayVerdict};
use clap::Args;

use crate::settings::{read_text, usage, validated, ConfigArgs};

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// Pointer trace written by `run` or `serve`.
    #[arg(long)]
    pub trace: PathBuf,

    /// The log the trace is expected to reproduce.
    #[arg(long)]
    pub log: PathBuf,

    /// Seed for traces that carry no config lines.
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub config: ConfigArgs,
}

pub fn cmd_replay(args: &ReplayArgs) -> anyhow::Result<ExitCode> {
    let mut base = args.config.load()?;
    if let Some(seed) = args.seed {
        base.rng_seed = seed;
    }
    let text = read_text(&args.trace)?;
    let original = read_text(&args.log)?;
    let mut trace = PointerTrace::parse(&text, &base).map_err(|e| anyhow::anyhow!("{}: {e}", args.trace.display()))?;
    trace.config = validated(trace.config)?;

    match verify_replay(&trace, &original).map_err(|e| usage(e.to_string()))? {
        ReplayVerdict::Identical => {
            println!("replay identical ({} samples)", trace.samples.len());
            Ok(ExitCode::SUCCESS)
        }
        ReplayVerdict::Diverged { first_divergent_tick, .. } => {
            match first_divergent_tick {
                Some(tick) => println!("replay diverged: first divergent tick {tick}"),
                None => println!("replay diverged: logs differ but recorded events match"),
            }
            Ok(ExitCode::from(3))
        }
    }
}
