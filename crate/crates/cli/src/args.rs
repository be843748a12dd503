use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Seed used when neither `--seed` nor `SHUFFLETEST_SEED` is given.
pub const DEFAULT_SEED: u64 = 2018;

#[derive(Debug, Parser)]
#[command(
    name = "shuffletest",
    version,
    about = "Uniformity tests for shuffled decks"
)]
pub struct Cli {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, env = "SHUFFLETEST_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

/// Every command with its fully resolved flags. This is what a manifest
/// records and what `replay` re-executes.
#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Simulate a dataset of shuffled decks into a `.perm` file.
    Simulate(SimulateArgs),
    /// Pearson χ² goodness of fit of a statistic's histogram.
    FreqTest(FreqTestArgs),
    /// Exchange-chain Bayes factor of uniformity against the exponential family.
    BayesTest(BayesTestArgs),
    /// Gamma-Poisson Bayes factor as a function of the prior shape α.
    ConjugateCurve(CurveArgs),
    /// Build and persist a table of log normalizing constants.
    Normalizer(NormalizerArgs),
    /// Bayes factor against shuffle count k over several datasets.
    Sweep(SweepArgs),
    /// Re-run a command recorded in a manifest.
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Deck size.
    #[arg(long, default_value_t = 52)]
    pub n: usize,
    /// Random transpositions per deck.
    #[arg(long)]
    pub k: usize,
    /// Number of independent decks.
    #[arg(long)]
    pub samples: usize,
    /// random-transpositions or uniform.
    #[arg(long, default_value = "random-transpositions")]
    pub scheme: String,
    #[arg(long, env = "SHUFFLETEST_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FreqTestArgs {
    /// A `.perm` file or a `value,count` histogram CSV.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: PathBuf,
    /// Integer-valued statistic evaluated on `.perm` input.
    #[arg(long, default_value = "fixed-points")]
    pub statistic: String,
    /// poisson:LAMBDA, uniform or explicit:P0,P1,...
    #[arg(long, default_value = "poisson:1")]
    pub model: String,
    /// Values at or above this form one tail cell.
    #[arg(long, default_value_t = 5)]
    pub lump: usize,
    /// Multinomial draws for a simulated p-value; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub simulate: usize,
    #[arg(long, env = "SHUFFLETEST_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Report JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Observed-vs-expected CSV (category,observed,expected).
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ChainArgs {
    /// Replicate chains.
    #[arg(long, default_value_t = 20)]
    pub chains: usize,
    /// Transitions per chain, burn-in included.
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 200)]
    pub burnin: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    /// Initial random-walk proposal standard deviation.
    #[arg(long, default_value_t = 0.2)]
    pub proposal_scale: f64,
    /// Inner Metropolis burn-in for statistics without an exact sampler.
    #[arg(long, default_value_t = 2000)]
    pub inner_steps: usize,
    /// normal:MU,SIGMA2, conjugate:N0,X0 or gamma:ALPHA,BETA.
    #[arg(long, default_value = "normal:0,0.1")]
    pub prior: String,
    /// P(H0)/P(H1).
    #[arg(long, default_value_t = 1.0)]
    pub prior_odds: f64,
    /// Normalizer table JSON, required for statistics other than fixed points.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, env = "SHUFFLETEST_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Exit with a runtime failure when R-hat or ESS diagnostics are poor.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BayesTestArgs {
    /// A `.perm` file, or a histogram CSV of fixed points together with `--n`.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "fixed-points")]
    pub statistic: String,
    /// Deck size; required for histogram input.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    /// Report JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Per-chain summary CSV; defaults to `<out>.chains.csv`.
    #[arg(long)]
    pub chains_csv: Option<PathBuf>,
    /// Directory for per-chain dumps (CSV samples and diagnostics JSON).
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CurveArgs {
    /// A `.perm` file or a histogram CSV of fixed points.
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: PathBuf,
    /// LO:HI:STEP.
    #[arg(long, default_value = "0.5:10:0.5", allow_hyphen_values = true)]
    pub alpha_grid: String,
    /// Curve CSV (alpha_or_k,bf,log_bf).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct NormalizerArgs {
    #[arg(long, default_value = "fixed-points")]
    pub statistic: String,
    #[arg(long, default_value_t = 52)]
    pub n: usize,
    /// exact, importance or thermo.
    #[arg(long, default_value = "exact")]
    pub method: String,
    /// LO:HI along the ray.
    #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
    pub theta_range: String,
    /// Grid points.
    #[arg(long, default_value_t = 61)]
    pub resolution: usize,
    /// Importance samples per grid point.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Metropolis transitions per thermodynamic node.
    #[arg(long, default_value_t = 20_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 2_000)]
    pub burnin: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    /// Ray direction for vector statistics, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
    #[arg(long, env = "SHUFFLETEST_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Table JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    /// `.perm` files whose headers record the shuffle count k.
    #[arg(long = "in", num_args = 1.., required = true)]
    #[serde(rename = "in")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "fixed-points")]
    pub statistic: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub chain: ChainArgs,
    /// Curve CSV (alpha_or_k,bf,log_bf).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded paths.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Fail unless every output matches the digest recorded in the manifest.
    #[arg(long)]
    pub verify: bool,
}
