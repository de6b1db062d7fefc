use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::estimator::VarianceModel;

/// Inclusive grid `start:end:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonGrid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl EpsilonGrid {
    pub fn points(&self) -> Vec<f64> {
        crate::numeric::linspace(self.start, self.end, self.count)
    }
}

impl FromStr for EpsilonGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("expected start:end:count, got {s:?}"));
        };
        let start: f64 = a.trim().parse().map_err(|_| format!("bad grid start {a:?}"))?;
        let end: f64 = b.trim().parse().map_err(|_| format!("bad grid end {b:?}"))?;
        let count: usize = c.trim().parse().map_err(|_| format!("bad grid count {c:?}"))?;
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
            return Err(format!("grid {s:?} must satisfy 0 <= start <= end <= 1"));
        }
        if count == 1 && start != end {
            return Err("a single-point grid needs start == end".into());
        }
        Ok(Self { start, end, count })
    }
}

impl fmt::Display for EpsilonGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.count)
    }
}

impl Serialize for EpsilonGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EpsilonGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Parser)]
#[command(name = "shadow-bias", version, about = "Biased classical-shadow estimators: analytics and experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON file with parameter overrides (keys are flag names with `_`).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; defaults to a generated name in the output directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Output directory [env: SHADOW_BIAS_OUTPUT_DIR, default: .].
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Average loss against epsilon for given Bloch-vector lengths.
    LossCurve {
        #[command(flatten)]
        args: LossCurveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Exact worst-case relative MSE curves.
    WorstCase {
        #[command(flatten)]
        args: WorstCaseArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Monte-Carlo best-case MSE curves.
    BestCase {
        #[command(flatten)]
        args: BestCaseArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Signal-to-noise report for a mean estimate (printed as JSON).
    Snr {
        #[command(flatten)]
        args: SnrArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Spin-ring perturbation experiment with three biasing strategies.
    Experiment {
        #[command(flatten)]
        args: ExperimentArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Combined low-weight plus high-weight energy estimator.
    Combined {
        #[command(flatten)]
        args: CombinedArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Single-qubit estimate clouds with their biased counterparts.
    DensitySamples {
        #[command(flatten)]
        args: DensityArgs,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LossCurve { .. } => "loss-curve",
            Command::WorstCase { .. } => "worst-case",
            Command::BestCase { .. } => "best-case",
            Command::Snr { .. } => "snr",
            Command::Experiment { .. } => "experiment",
            Command::Combined { .. } => "combined",
            Command::DensitySamples { .. } => "density-samples",
        }
    }
}

/// Fills every unset field of `self` from `other`.
pub trait Merge {
    fn merge(self, other: Self) -> Self;
}

macro_rules! mergeable {
    ($name:ident { $($field:ident),* $(,)? }) => {
        impl Merge for $name {
            fn merge(self, other: Self) -> Self {
                Self { $($field: self.$field.or(other.$field)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossCurveArgs {
    /// Bloch-vector lengths [default: 0.25,0.5,0.75,1].
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<f64>>,
    /// start:end:count [default: 0:1:101].
    #[arg(long)]
    pub epsilon_grid: Option<EpsilonGrid>,
}
mergeable!(LossCurveArgs { r, epsilon_grid });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorstCaseArgs {
    /// Pauli weights [default: 1,2,4].
    #[arg(long, value_delimiter = ',')]
    pub w: Option<Vec<usize>>,
    /// Shot counts [default: 10,100,1000].
    #[arg(long, value_delimiter = ',')]
    pub n_s: Option<Vec<usize>>,
    /// start:end:count [default: 0:0.99:100].
    #[arg(long)]
    pub epsilon_grid: Option<EpsilonGrid>,
}
mergeable!(WorstCaseArgs { w, n_s, epsilon_grid });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BestCaseArgs {
    /// Pauli weights [default: 1,2].
    #[arg(long, value_delimiter = ',')]
    pub w: Option<Vec<usize>>,
    /// Shot counts [default: 10,100].
    #[arg(long, value_delimiter = ',')]
    pub n_s: Option<Vec<usize>>,
    /// start:end:count [default: 0:1:21].
    #[arg(long)]
    pub epsilon_grid: Option<EpsilonGrid>,
    /// Monte-Carlo repetitions per point [default: 100000].
    #[arg(long)]
    pub reps: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
}
mergeable!(BestCaseArgs { w, n_s, epsilon_grid, reps, seed });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrArgs {
    /// Single-shot mean (alternative to --w/--expectation).
    #[arg(long, allow_negative_numbers = true)]
    pub mean: Option<f64>,
    /// Single-shot variance.
    #[arg(long)]
    pub variance: Option<f64>,
    /// Pauli weight; the variance becomes 3^w - expectation^2.
    #[arg(long)]
    pub w: Option<usize>,
    /// Expectation value of the Pauli string, used with --w.
    #[arg(long, allow_negative_numbers = true)]
    pub expectation: Option<f64>,
    #[arg(long)]
    pub n_s: Option<usize>,
}
mergeable!(SnrArgs { mean, variance, w, expectation, n_s });

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceModelArg {
    Theoretical,
    Empirical,
}

impl From<VarianceModelArg> for VarianceModel {
    fn from(v: VarianceModelArg) -> Self {
        match v {
            VarianceModelArg::Theoretical => VarianceModel::Theoretical,
            VarianceModelArg::Empirical => VarianceModel::Empirical,
        }
    }
}


#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentArgs {
    /// Ring size [default: 8].
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling J [default: 0.3].
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Seed of the on-site fields [default: 0].
    #[arg(long)]
    pub omega_seed: Option<u64>,
    /// Shots per collection [default: 10000].
    #[arg(long)]
    pub n_s: Option<usize>,
    /// Observable weight [default: 6].
    #[arg(long)]
    pub w: Option<usize>,
    /// Number of observables [default: 20].
    #[arg(long)]
    pub n_obs: Option<usize>,
    /// [default: 1000]
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Estimate alpha and the mean on disjoint halves.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub split: Option<bool>,
    /// [default: theoretical]
    #[arg(long)]
    pub variance_model: Option<VarianceModelArg>,
}

mergeable!(ExperimentArgs { n, coupling, omega_seed, n_s, w, n_obs, repetitions, seed, split, variance_model });

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSourceArg {
    Exact,
    Plugin,
    Fixed,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinedArgs {
    /// Ring size [default: 8].
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling J [default: 0.3].
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Seed of the on-site fields [default: 0].
    #[arg(long)]
    pub omega_seed: Option<u64>,
    /// Shots per collection [default: 10000].
    #[arg(long)]
    pub n_s: Option<usize>,
    /// Correction Pauli string; when absent, the largest-SNR string below
    /// SNR 1 among 50 random weight-w draws.
    #[arg(long)]
    pub pauli: Option<String>,
    /// Weight of the drawn correction [default: 6].
    #[arg(long)]
    pub w: Option<usize>,
    /// [default: 1000]
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// [default: exact]
    #[arg(long)]
    pub alpha_source: Option<AlphaSourceArg>,
    /// Shrinkage for --alpha-source fixed.
    #[arg(long)]
    pub alpha: Option<f64>,
}

mergeable!(CombinedArgs { n, coupling, omega_seed, n_s, pauli, w, repetitions, seed, alpha_source, alpha });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityArgs {
    /// Bloch vector x,y,z [default: 0,0,0.45333...].
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub bloch: Option<Vec<f64>>,
    /// Shots per estimate [default: 100].
    #[arg(long)]
    pub n_s: Option<usize>,
    /// Number of estimates [default: 1000].
    #[arg(long)]
    pub n_points: Option<usize>,
    /// [default: 0.1]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
}
mergeable!(DensityArgs { bloch, n_s, n_points, epsilon, seed });
