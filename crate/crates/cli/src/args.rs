use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "qndsim", version, about = "Light-matter QND transfer: self-checks and parameter sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the deterministic transfer identities and symplecticity.
    VerifyDeterministic(CommonArgs),
    /// Sweep the post-selection half-width Q.
    SweepQ(CommonArgs),
    /// Sweep the coupling κ = κ1 = κ2 at fixed success probabilities.
    SweepKappa(CommonArgs),
    /// Sweep the matter-mode noise V_A at fixed success probabilities.
    SweepVa(CommonArgs),
    /// Write protocol matrices or input states as JSON.
    Dump(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Sequential,
    Joint,
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    SinglePhoton,
    Vacuum,
    Thermal,
}

/// Every flag is optional so that a `--config` file can supply it; flags
/// given on the command line win.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON file with any of the options below (snake_case keys).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub kappa1: Option<f64>,
    #[arg(long)]
    pub kappa2: Option<f64>,
    /// One or more couplings, comma separated (κ1 = κ2 = κ).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub kappa: Option<Vec<f64>>,
    /// Variance of the auxiliary light mode M.
    #[arg(long, allow_hyphen_values = true)]
    pub vm: Option<f64>,
    /// Variance of the matter mode A.
    #[arg(long, allow_hyphen_values = true)]
    pub va: Option<f64>,
    /// Sign of the optical pre-processing coupling κ3.
    #[arg(long, value_enum)]
    pub kappa3_sign: Option<SignArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_p: Option<f64>,
    /// Q range `lo,hi` for sweep-q.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Swept range `lo,hi` for sweep-kappa and sweep-va.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Logarithmic spacing of the swept grid.
    #[arg(long)]
    pub log: bool,
    /// Target success probabilities, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ps_target: Option<Vec<f64>>,
    /// Initial Gauss-Legendre order per window axis.
    #[arg(long)]
    pub order: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Seed of the random-gain suite in verify-deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random gain draws in verify-deterministic.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write an SVG plot of the sweep.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub dump_matrix: Option<MatrixKind>,
    #[arg(long, value_enum)]
    pub dump_state: Option<StateKind>,
    /// Variance of the dumped thermal state.
    #[arg(long, allow_hyphen_values = true)]
    pub variance: Option<f64>,
    /// Load a previously dumped matrix or state and write it back out.
    #[arg(long)]
    pub load: Option<PathBuf>,
}
