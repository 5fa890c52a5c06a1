//! Session configuration from a key-value file plus `--set` flags.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use brainb_core::SessionConfig;
use clap::Args;

/// A flag or config value the user has to fix. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Args, Debug, Clone, Default)]
pub struct ConfigArgs {
    /// Flat `key = value` file with session settings.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Override one setting, e.g. `--set noc_max=80`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl ConfigArgs {
    /// Defaults, then the file, then `--set` flags.
    pub fn load(&self) -> anyhow::Result<SessionConfig> {
        let mut config = SessionConfig::default();
        if let Some(path) = &self.config {
            let text = read_text(path)?;
            config
                .apply_kv_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        }
        for kv in &self.overrides {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            config.set(key, value).map_err(|e| usage(format!("--set {kv}: {e}")))?;
        }
        Ok(config)
    }
}

pub fn validated(config: SessionConfig) -> anyhow::Result<SessionConfig> {
    config.validate().map_err(|e| usage(e.to_string()))?;
    Ok(config)
}

pub fn read_text(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
