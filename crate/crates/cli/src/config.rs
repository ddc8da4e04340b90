use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{Format, GlobalArgs};
use crate::error::CliError;

pub const DEFAULT_DIGITS: usize = 12;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    format: Option<Format>,
    out: Option<PathBuf>,
    tol: Option<f64>,
    threads: Option<usize>,
    digits: Option<usize>,
}

/// Resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub threads: Option<usize>,
    pub digits: usize,
}

fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => read_config(p)?,
            None => ConfigFile::default(),
        };
        let cfg = Self {
            format: args.format.or(file.format).unwrap_or_default(),
            out: args.out.clone().or(file.out),
            tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            threads: args.threads.or(file.threads),
            digits: args.digits.or(file.digits).unwrap_or(DEFAULT_DIGITS),
        };
        if cfg.tol.is_nan() || cfg.tol <= 0.0 {
            return Err(CliError::Usage(format!("tolerance must be positive, got {}", cfg.tol)));
        }
        if !(6..=17).contains(&cfg.digits) {
            return Err(CliError::Usage(format!(
                "digits must be in [6, 17], got {}",
                cfg.digits
            )));
        }
        if cfg.threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        Ok(cfg)
    }
}
