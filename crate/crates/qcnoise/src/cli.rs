//! Command-line surface.
//!
//! Every analysis is a subcommand with machine-readable output. Shared
//! flags can also be set through `QCNOISE_*` environment variables
//! (`QCNOISE_SEED`, `QCNOISE_FORMAT`, …); a flag on the command line wins.
//!
//! Exit codes: 0 success (and informational runs), 1 usage or parse errors,
//! 2 enumeration-cap exceeded, 3 sandwich assertion violated.

use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qcnoise_core::BiasExponent;

use crate::report::OutputFormat;

/// Default seed, fixed so published numbers reproduce; override with
/// `--seed`.
pub const DEFAULT_SEED: u64 = 271828;

#[derive(Debug, Parser)]
#[command(
    name = "qcnoise",
    version,
    about = "Distribution analysis of quasi-cyclic Bernoulli noise products over F2[X]/(X^n - 1)",
    long_about = "Computes, exactly at desk scale and in closed form at any scale, how far the \
                  law of t1*R1 + ... + ts*Rs strays from the independent-coordinate model with \
                  the same Ber(tau*omega) marginals."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact KL/TV/entropies against the independent model (n ≤ cap)
    Exact(ExactArgs),
    /// Closed-form divergences and the Pinsker envelope (any n)
    Bounds(BoundsArgs),
    /// The λ shift-overlap profile of the fixed polynomials
    Lambda(LambdaArgs),
    /// Closed-form pairwise joint law of two noise coefficients
    Pair(PairArgs),
    /// Seeded Monte-Carlo weight statistics
    Weights(WeightsArgs),
    /// Check reverse-Pinsker ≤ TV ≤ Pinsker on the exact tables
    Sandwich(SandwichArgs),
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    /// Ring length n of `P_n = F2[X]/(X^n - 1)`
    #[arg(long, env = "QCNOISE_N")]
    pub n: usize,
    /// Fixed polynomial as comma-separated support indices, e.g. `0,1,2`
    /// for 1 + X + X^2 (repeat for t1, t2, ...)
    #[arg(long = "t", value_name = "SUPPORT")]
    pub t: Vec<String>,
    /// Parse --t values as dense hex coefficient strings instead
    #[arg(long)]
    pub dense: bool,
    /// Number of terms; inferred from repeated --t, checked when given
    #[arg(long)]
    pub s: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, env = "QCNOISE_FORMAT")]
    pub format: OutputFormat,
    /// Write the report to this path instead of stdout
    #[arg(long, env = "QCNOISE_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Largest n for which 2^n tables are built
    #[arg(long = "cap-n", default_value_t = 20, env = "QCNOISE_CAP_N")]
    pub cap_n: usize,
}

#[derive(Debug, Args)]
pub struct ThreadArgs {
    /// Worker threads for Monte-Carlo runs (default: available parallelism).
    /// Results are identical for any thread count; table construction is
    /// sequential by design.
    #[arg(long, env = "QCNOISE_THREADS")]
    pub threads: Option<NonZeroUsize>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Bias exponent ω (a nonnegative decimal or `inf`)
    #[arg(long, env = "QCNOISE_OMEGA")]
    pub omega: BiasExponent,
    #[command(flatten)]
    pub caps: CapArgs,
    /// Also export the exact distribution table to this path
    #[arg(long, value_name = "PATH")]
    pub dist_out: Option<PathBuf>,
    /// Table export format (`csv`: index,probability rows; `bin`: raw
    /// little-endian doubles behind a magic header)
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub dist_format: TableFormat,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Bin,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Ring length n
    #[arg(long, env = "QCNOISE_N")]
    pub n: usize,
    /// Bias exponent ω (a nonnegative decimal or `inf`)
    #[arg(long, env = "QCNOISE_OMEGA")]
    pub omega: BiasExponent,
    /// Total weight τ = |t1| + ... + |ts| (inferred from --t when present)
    #[arg(long)]
    pub tau: Option<usize>,
    /// Number of terms s (inferred from --t when present, else 1)
    #[arg(long)]
    pub s: Option<usize>,
    /// Optional explicit polynomials (enables the spanning check)
    #[arg(long = "t", value_name = "SUPPORT")]
    pub t: Vec<String>,
    /// Parse --t values as dense hex coefficient strings instead
    #[arg(long)]
    pub dense: bool,
    /// Include the arithmetic-progression divergence lower bound
    #[arg(long)]
    pub ap: bool,
    /// Common difference of the progressions (with --ap; default 1)
    #[arg(long)]
    pub a: Option<usize>,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Accepted for flag symmetry; the λ profile does not depend on ω
    #[arg(long, env = "QCNOISE_OMEGA")]
    pub omega: Option<BiasExponent>,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Bias exponent ω (a nonnegative decimal or `inf`)
    #[arg(long, env = "QCNOISE_OMEGA")]
    pub omega: BiasExponent,
    /// First coefficient index
    #[arg(long)]
    pub i: usize,
    /// Second coefficient index (must differ from --i)
    #[arg(long)]
    pub j: usize,
    #[command(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Bias exponent ω (a nonnegative decimal or `inf`)
    #[arg(long, env = "QCNOISE_OMEGA")]
    pub omega: BiasExponent,
    /// Monte-Carlo trials
    #[arg(long, default_value_t = 10_000, env = "QCNOISE_TRIALS")]
    pub trials: u64,
    /// Master seed of the deterministic generator
    #[arg(long, default_value_t = DEFAULT_SEED, env = "QCNOISE_SEED")]
    pub seed: u64,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SandwichArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Bias exponent ω (a nonnegative decimal or `inf`)
    #[arg(long, env = "QCNOISE_OMEGA")]
    pub omega: BiasExponent,
    #[command(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
