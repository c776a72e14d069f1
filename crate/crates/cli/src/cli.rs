use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::experiments::{gallery, gate, identities, kernel, kovalevskaya, nonlinear, taylor};

#[derive(Debug, Parser)]
#[command(name = "chronolens", version, about = "Time-analyticity verification experiments")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// TOML file with `seed`, `formats` and one table per subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default `chronolens-out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report formats to write, comma separated.
    #[arg(long = "format", global = true, value_delimiter = ',')]
    pub formats: Option<Vec<Format>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact identity suite and the weighted multinomial sum scan.
    Identities(identities::Flags),
    /// Kovalevskaya coefficients and their growth ratio.
    Kovalevskaya(kovalevskaya::Flags),
    /// Forward and backward Taylor round-trips against closed forms.
    Taylor(taylor::Flags),
    /// Backward-solvability gate for one datum.
    BackwardGate(gate::Flags),
    /// Heat-kernel derivative bound scan and certification.
    KernelBounds(kernel::Flags),
    /// Explicit solutions and counterexamples.
    Gallery(gallery::Flags),
    /// Semilinear heat equation: stepper, jets and the growth fit.
    Nonlinear(nonlinear::Flags),
    /// Every acceptance check.
    All,
}
