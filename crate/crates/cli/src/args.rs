use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "modkernel",
    version,
    about = "Modular Hamiltonian kernels of the free scalar field in 1+1 dimensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample M-(x, y) on the grid and write it as `x,y,value` rows
    Kernel(RunArgs),
    /// Smear M- against Gaussian probes at a list of centres
    Scan(RunArgs),
    /// Repeat a scan over a ladder of (cells, half-width, digits) rungs
    Converge(ConvergeArgs),
    /// Run the built-in consistency checks
    Selfcheck(SelfcheckArgs),
}

/// Run parameters. Every flag overrides the same key in `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// `key = value` file; `#` starts a comment
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// wedge, left-wedge or interval
    #[arg(long)]
    pub region: Option<String>,
    /// Wedge edge
    #[arg(long, allow_hyphen_values = true)]
    pub edge: Option<String>,
    /// Interval left end
    #[arg(long, allow_hyphen_values = true)]
    pub left: Option<String>,
    /// Interval right end
    #[arg(long, allow_hyphen_values = true)]
    pub right: Option<String>,
    /// Field mass; repeat for a mass ladder
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Vec<String>,
    /// Number of grid cells N
    #[arg(long)]
    pub cells: Option<usize>,
    /// Box half-width b
    #[arg(long)]
    pub halfwidth: Option<String>,
    /// Decimal digits of working precision
    #[arg(long, env = "MODKERNEL_DIGITS")]
    pub digits: Option<u32>,
    /// Basis mode: standard or split
    #[arg(long)]
    pub mode: Option<String>,
    /// Probe width
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Probe centre; repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Vec<String>,
    /// Probe centres as `lo:hi:step`, both ends included
    #[arg(long, allow_hyphen_values = true)]
    pub mu_range: Option<String>,
    /// Output file; per-mass files get a `_m<mass>` suffix
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write every working digit instead of 30
    #[arg(long)]
    pub full_precision: bool,
    /// Allow a box narrower than twice the region extent
    #[arg(long)]
    pub allow_small_box: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Rung `N:b:digits`; repeatable, run in the given order
    #[arg(long, required = true)]
    pub ladder: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SelfcheckArgs {
    #[arg(long, env = "MODKERNEL_DIGITS", default_value_t = 50)]
    pub digits: u32,
    /// Deliberately break the named check (exercises the failure path)
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}
