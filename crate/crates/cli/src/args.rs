use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "spindiscord",
    version,
    about = "Pairwise quantum discord in XY and XXZ spin chains"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Unset flags fall back to `--config`, then defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Absolute quadrature tolerance for XY integrals.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, env = "SPINDISCORD_THREADS")]
    pub threads: Option<usize>,
    /// Significant digits in the output, 6 to 17.
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    /// JSON file with any of `format`, `out`, `tol`, `threads`, `digits`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transverse-field XY chain in the thermodynamic limit.
    #[command(subcommand)]
    Xy(XyCommand),
    /// Finite XXZ chain with domain-wall boundary fields.
    #[command(subcommand)]
    Xxz(XxzCommand),
    /// Fit both decay laws to an external CSV profile with columns `n,discord`.
    Fit(FitArgs),
}

#[derive(Debug, Subcommand)]
pub enum XyCommand {
    /// Correlators and discord of one pair.
    Pair(XyPairArgs),
    /// Discord at distances 1..=n-max.
    Profile(XyProfileArgs),
    /// Range ratio over a (gamma, lambda) grid.
    Heatmap(XyHeatmapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum MethodArg {
    /// σˣ closed form, falling back to the optimizer when it does not apply.
    #[default]
    Auto,
    ClosedForm,
    Optimized,
}

#[derive(Debug, Args)]
pub struct XyPairArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long)]
    pub n: usize,
    /// Inverse temperature; ground state when absent.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct XyProfileArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    /// One or more couplings, comma separated; the default spans both phases.
    #[arg(long, allow_negative_numbers = true, value_delimiter = ',', num_args = 1.., default_values_t = [0.5, 0.75, 1.1, 1.5])]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Append the exponential fit.
    #[arg(long)]
    pub fit: bool,
}

#[derive(Debug, Args)]
pub struct XyHeatmapArgs {
    #[arg(long, default_value_t = 0.0)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 21)]
    pub gamma_steps: usize,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 21)]
    pub lambda_steps: usize,
    /// Number of distances in the ratio.
    #[arg(long, default_value_t = 10)]
    pub m: usize,
}

#[derive(Debug, Subcommand)]
pub enum XxzCommand {
    /// Discord of pairs (N/2, N/2 + n) in the ground state, with both fits.
    Profile(XxzProfileArgs),
    /// Field separating the ferromagnetic and kink ground states.
    CriticalField(CriticalFieldArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SideArg {
    First,
    #[default]
    Second,
}

#[derive(Debug, Args)]
pub struct XxzProfileArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub h: f64,
    #[arg(long, default_value_t = 14)]
    pub sites: usize,
    /// Largest distance; defaults to a window that stays clear of the boundary.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub measure: SideArg,
}

#[derive(Debug, Args)]
pub struct CriticalFieldArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with a header containing `n` and `discord`; `#` lines are skipped.
    #[arg(long)]
    pub input: PathBuf,
}
