//! Flag surface. Every arg struct also serializes, because each report
//! embeds the exact configuration it was produced from.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "matrix-tails",
    version,
    about = "Spectral tail bounds for sums of random matrices: evaluate bound curves, \
             simulate ensembles, and run the verification suites"
)]
pub struct Cli {
    /// Directory where the JSON report (and CSV curves, where applicable)
    /// are written.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Omit the wall-clock timestamp from the report so identical
    /// configurations produce byte-identical files.
    #[arg(long, global = true)]
    pub deterministic: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a closed-form tail bound at one threshold or on a grid
    Bound(BoundArgs),
    /// Monte Carlo tail of an ensemble, optionally checked against a bound
    Simulate(SimulateArgs),
    /// Randomized semidefinite lemma suite
    VerifyLemmas(VerifyLemmasArgs),
    /// Exact sign-series moment comparison for a coefficient family
    Khintchine(KhintchineArgs),
    /// Compare the pooled, summed, and weak variance statistics of a family
    CompareVariance(CompareVarianceArgs),
    /// Estimate the mean spectral norm of an ensemble against its references
    MeanStudy(MeanStudyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// d e^{-t^2 / 2 sigma^2} for self-adjoint series (x2 two-sided)
    Gaussian,
    /// (d1 + d2) e^{-t^2 / 2 sigma^2} for rectangular series
    RectGaussian,
    /// divergence-form bound for sums of bounded psd summands
    ChernoffI,
    /// multiplicative-form bound for sums of bounded psd summands
    ChernoffII,
    /// Bennett / Bernstein / split-regime family for bounded summands
    BernsteinBounded,
    /// subexponential moment-growth family
    BernsteinSubexp,
    /// rectangular Bernstein bound
    BernsteinRect,
    /// martingale bound d e^{-t^2 / 8 sigma^2} (or /2 when symmetric)
    Azuma,
    /// bounded-differences corollary of the martingale bound
    Mcdiarmid,
    /// numerically optimized master bound over mgf models from a file
    Master,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Gaussian => "gaussian",
            Theorem::RectGaussian => "rect-gaussian",
            Theorem::ChernoffI => "chernoff-i",
            Theorem::ChernoffII => "chernoff-ii",
            Theorem::BernsteinBounded => "bernstein-bounded",
            Theorem::BernsteinSubexp => "bernstein-subexp",
            Theorem::BernsteinRect => "bernstein-rect",
            Theorem::Azuma => "azuma",
            Theorem::Mcdiarmid => "mcdiarmid",
            Theorem::Master => "master",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideArg {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatArg {
    #[value(name = "lambda_max", alias = "lambda-max")]
    LambdaMax,
    #[value(name = "lambda_min", alias = "lambda-min")]
    LambdaMin,
    #[value(name = "norm", alias = "spectral_norm")]
    Norm,
}

/// Threshold grid flags shared by curve-producing commands.
#[derive(Args, Debug, Serialize)]
pub struct GridArgs {
    /// Smallest threshold on the grid
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,

    /// Largest threshold on the grid
    #[arg(long)]
    pub t_max: Option<f64>,

    /// Number of grid points (at least 2)
    #[arg(long, default_value_t = 25)]
    pub t_count: usize,

    /// Space the grid logarithmically (requires --t-min > 0)
    #[arg(long)]
    pub log_grid: bool,
}

/// Parameters consumed by the bound registry. Which ones are required
/// depends on the theorem; missing ones are reported as usage errors.
#[derive(Args, Debug, Serialize)]
pub struct TheoremParams {
    /// Variance statistic sigma^2
    #[arg(long)]
    pub sigma2: Option<f64>,

    /// Ambient dimension d
    #[arg(long)]
    pub d: Option<usize>,

    /// Row dimension of a rectangular sum
    #[arg(long)]
    pub d1: Option<usize>,

    /// Column dimension of a rectangular sum
    #[arg(long)]
    pub d2: Option<usize>,

    /// Per-summand spectral cap R (default 1)
    #[arg(long)]
    pub r: Option<f64>,

    /// Spectral edge of the summed means (psd bounds)
    #[arg(long)]
    pub mu: Option<f64>,

    /// Which spectral edge a psd bound addresses
    #[arg(long, value_enum, default_value_t = SideArg::Upper)]
    pub side: SideArg,

    /// Bound the two-sided event ||Y|| >= t instead of lambda_max >= t
    #[arg(long)]
    pub two_sided: bool,

    /// Martingale differences are conditionally symmetric
    #[arg(long)]
    pub conditionally_symmetric: bool,

    /// Use the simplified multiplicative forms
    #[arg(long)]
    pub simplified: bool,

    /// JSON file of mgf models (for --theorem master):
    /// [{"kind": "gaussian", "shape": [[...], ...]}, ...]
    #[arg(long)]
    pub models: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundArgs {
    /// Which bound to evaluate
    #[arg(long, value_enum)]
    pub theorem: Theorem,

    /// Evaluate at a single threshold and print the raw value
    #[arg(long, conflicts_with_all = ["t_min", "t_max", "t_count", "log_grid"])]
    pub t: Option<f64>,

    /// Number of summands (psd bounds)
    #[arg(long)]
    pub n: Option<usize>,

    #[command(flatten)]
    pub grid: GridArgs,

    #[command(flatten)]
    pub params: TheoremParams,
}

/// Ensemble selection flags shared by `simulate` and `mean-study`.
#[derive(Args, Debug, Serialize)]
pub struct EnsembleArgs {
    /// Which ensemble to draw from
    #[arg(long, value_enum, required_unless_present = "spec_json", conflicts_with = "spec_json")]
    pub ensemble: Option<EnsembleKind>,

    /// Ambient dimension (dimension-parametrized ensembles)
    #[arg(long)]
    pub dim: Option<usize>,

    /// Number of summands (coupon, rank-one-psd)
    #[arg(long)]
    pub n: Option<usize>,

    /// Coefficient family: a directory of CSV matrices or a JSON file
    #[arg(long)]
    pub family: Option<PathBuf>,

    /// Base matrix CSV for the entrywise-scaled Gaussian rectangle
    #[arg(long)]
    pub base: Option<PathBuf>,

    /// Load a full ensemble spec from JSON instead of assembling it from flags
    #[arg(long)]
    pub spec_json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    GaussianSeries,
    RademacherSeries,
    NonuniformGaussian,
    Goe,
    DiagGaussian,
    Coupon,
    RankOnePsd,
    SignModulated,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,

    /// Scalar statistic of each realization
    #[arg(long, value_enum, default_value_t = StatArg::LambdaMax)]
    pub stat: StatArg,

    /// Number of Monte Carlo trials
    #[arg(long)]
    pub trials: u64,

    /// Seed for the keyed sampler
    #[arg(long)]
    pub seed: u64,

    #[command(flatten)]
    pub grid: GridArgs,

    /// Overlay this bound on the simulated grid and check dominance
    #[arg(long, value_enum)]
    pub theorem: Option<Theorem>,

    #[command(flatten)]
    pub params: TheoremParams,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyLemmasArgs {
    /// Matrix dimension for the randomized instances
    #[arg(long)]
    pub dim: usize,

    /// Number of random instances per lemma
    #[arg(long)]
    pub instances: usize,

    /// Seed for the keyed instance generator
    #[arg(long)]
    pub seed: u64,

    /// Worst tolerated violation (a nonnegative slack)
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct KhintchineArgs {
    /// Coefficient family: a directory of CSV matrices or a JSON file
    #[arg(long)]
    pub family: PathBuf,

    /// Largest moment order 2p to compare
    #[arg(long, default_value_t = 4)]
    pub p_max: usize,

    /// Tolerated relative excess of the moment ratio over 1
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct CompareVarianceArgs {
    /// Coefficient family: a directory of CSV matrices or a JSON file
    #[arg(long)]
    pub family: PathBuf,

    /// Restarts of the alternating weak-variance maximization
    #[arg(long, default_value_t = 5)]
    pub restarts: u32,

    /// Seed for the maximization restarts
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct MeanStudyArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,

    /// Number of Monte Carlo trials
    #[arg(long)]
    pub trials: usize,

    /// Seed for the keyed sampler
    #[arg(long)]
    pub seed: u64,
}
