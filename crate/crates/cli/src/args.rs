use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "occtime",
    version,
    about = "Occupation-time moments, transforms, densities and simulations of one-dimensional diffusions",
    args_override_self = true
)]
pub struct Cli {
    /// Worker threads for simulations and sweeps (default: logical cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Flat TOML file of `key = value` pairs named like the flags; flags
    /// given on the command line take precedence. A `command` key selects
    /// the subcommand when none is given.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact or numeric occupation-time moments.
    Moments(MomentsArgs),
    /// Transform of the occupation time up to an independent exponential time.
    Mgf(MgfArgs),
    /// Occupation-time densities and distribution functions.
    Density(DensityArgs),
    /// Monte Carlo simulation of occupation times.
    Simulate(SimulateArgs),
    /// Laplace inversion of the sticky Brownian moment transforms.
    Invert(InvertArgs),
    /// Runs the cross-validation matrix.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffusionKind {
    Bm,
    SkewBm,
    Bessel,
    Oscillating,
    Spider,
    Sticky,
}

/// Model parameters. Numbers may be decimals or `p/q` fractions.
#[derive(Debug, Clone, Args, Serialize)]
pub struct DiffusionArgs {
    #[arg(long, value_enum)]
    pub diffusion: DiffusionKind,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma_plus: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma_minus: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Spider ray probabilities, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Vec<String>,
    /// Spider rays (1-based) whose occupation is measured, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rays: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Output format (default: from the file extension, else csv).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    /// Closed forms (and the exact recursion for sticky `A`).
    Closed,
    /// The Bessel moment recursion.
    Recursion,
    /// Laplace-domain recursion driven by quadrature; needs `--lambda`.
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// Time in `[0, ∞)`.
    A,
    /// Time in `(0, ∞)`.
    B,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub diffusion: DiffusionArgs,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Laplace variable; required for sticky BM and for `--method generic`.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Treat parameters as exact rationals and print `p/q` values.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: MomentMethod,
    /// Sticky BM functional.
    #[arg(long, value_enum, default_value = "b")]
    pub functional: Functional,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MgfMethodArg {
    /// Green-kernel quadrature (any diffusion).
    Quadrature,
    /// Skew Bessel closed form.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSideArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MgfArgs {
    #[command(flatten)]
    pub diffusion: DiffusionArgs,
    #[arg(long)]
    pub lambda: f64,
    /// Rates on `[0, ∞)`, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<f64>,
    /// Rate on `(-∞, 0)`; switches to the two-sided transform.
    #[arg(long)]
    pub q: Option<f64>,
    /// Starting point; with `--q` it is also the threshold.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    /// Half-line that receives the point 0 in the two-sided transform.
    #[arg(long, value_enum, default_value = "plus")]
    pub zero_side: ZeroSideArg,
    #[arg(long, value_enum, default_value = "quadrature")]
    pub method: MgfMethodArg,
    /// Sticky BM functional.
    #[arg(long, value_enum, default_value = "b")]
    pub functional: Functional,
    #[arg(long, default_value_t = 1e-13)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Lamperti,
    SkewBm,
    Arcsine,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Points in [0, 1] at which to evaluate pdf and cdf, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
    /// Instead of pdf/cdf rows, print moments 1..=N by density quadrature.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeArg {
    SkewWalk,
    ChainApprox,
    Euler,
    StickyWalk,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub diffusion: DiffusionArgs,
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    /// Time step, or innermost grid point for the chain (default: per scheme).
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    #[arg(long, default_value_t = 2)]
    pub n_max: usize,
    /// Sticky BM functional.
    #[arg(long, value_enum, default_value = "b")]
    pub functional: Functional,
    /// Also write per-path samples as CSV.
    #[arg(long, value_name = "FILE")]
    pub samples: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InvertArgs {
    /// Only sticky BM is supported.
    #[arg(long, value_enum, default_value = "sticky")]
    pub diffusion: DiffusionKind,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Times, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 32)]
    pub order: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    pub scale: ScaleArg,
    /// Run only these criteria, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<usize>,
    /// JSON report file (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
