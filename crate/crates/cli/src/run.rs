use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use brainb_core::logkit::format_g6;
use brainb_core::{run_headless, PointerModel};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use crate::artifacts::write_session;
use crate::settings::{usage, validated, ConfigArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Perfect,
    Absent,
    Lagged,
    Capacity,
}

/// Inclusive seed range written `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedRange {
    pub first: u64,
    pub last: u64,
}

impl FromStr for SeedRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once("..").ok_or("expected a..b")?;
        let first = a.trim().parse::<u64>().map_err(|e| format!("{a}: {e}"))?;
        let last = b.trim().parse::<u64>().map_err(|e| format!("{b}: {e}"))?;
        if last < first {
            return Err(format!("empty range {s}"));
        }
        Ok(Self { first, last })
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "capacity")]
    pub model: ModelName,

    /// Single seed. Defaults to `rng_seed` from the config.
    #[arg(long, conflicts_with = "seeds")]
    pub seed: Option<u64>,

    /// Inclusive seed range, one run per seed, e.g. `1..10`.
    #[arg(long)]
    pub seeds: Option<SeedRange>,

    #[arg(long, default_value_t = 50_000)]
    pub capacity_bps: u64,

    /// Lagged model delay in ticks.
    #[arg(long, default_value_t = 3)]
    pub latency: usize,

    /// Pointer jitter sigma in pixels (lagged and capacity models).
    #[arg(long)]
    pub noise: Option<f64>,

    /// Calm ticks the capacity model needs before tracking again.
    #[arg(long)]
    pub reacquire: Option<u32>,

    #[arg(long)]
    pub duration_ticks: Option<u64>,

    #[command(flatten)]
    pub config: ConfigArgs,

    #[arg(long, env = "BRAINB_OUT_DIR", default_value = ".")]
    pub out: PathBuf,
}

impl RunArgs {
    fn model(&self) -> PointerModel {
        let mut model = match self.model {
            ModelName::Perfect => PointerModel::perfect(),
            ModelName::Absent => PointerModel::absent(),
            ModelName::Lagged => PointerModel::lagged_noisy(self.latency, 4.0),
            ModelName::Capacity => PointerModel::capacity(self.capacity_bps),
        };
        if let Some(sigma) = self.noise {
            model.noise_sigma = sigma;
        }
        if let Some(ticks) = self.reacquire {
            model.reacquire_ticks = ticks;
        }
        model
    }

    fn label(&self) -> &'static str {
        match self.model {
            ModelName::Perfect => "perfect",
            ModelName::Absent => "absent",
            ModelName::Lagged => "lagged",
            ModelName::Capacity => "capacity",
        }
    }
}

pub fn cmd_run(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let mut config = args.config.load()?;
    if let Some(ticks) = args.duration_ticks {
        config.duration_ticks = ticks;
    }
    let config = validated(config)?;
    let model = args.model();
    model.validate().map_err(|e| usage(e.to_string()))?;

    let seeds: Vec<u64> = match (args.seed, args.seeds) {
        (_, Some(range)) => (range.first..=range.last).collect(),
        (Some(seed), None) => vec![seed],
        (None, None) => vec![config.rng_seed],
    };

    let lines: Vec<anyhow::Result<String>> = seeds
        .par_iter()
        .map(|&seed| {
            let run = run_headless(&config, &model, seed)?;
            let stem = format!("{}-seed{seed}", args.label());
            write_session(&args.out, &stem, &run.record, &run.frame, &run.trace.config, Some(&run.trace))?;
            Ok(format!("{stem}: U R about {} Kilobytes", format_g6(run.record.kilobytes)))
        })
        .collect();
    for line in lines {
        println!("{}", line?);
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_ranges_are_inclusive() {
        assert_eq!("1..10".parse::<SeedRange>().unwrap(), SeedRange { first: 1, last: 10 });
        assert_eq!("4..4".parse::<SeedRange>().unwrap(), SeedRange { first: 4, last: 4 });
        assert!("5..1".parse::<SeedRange>().is_err());
        assert!("7".parse::<SeedRange>().is_err());
        assert!("a..3".parse::<SeedRange>().is_err());
    }
}
