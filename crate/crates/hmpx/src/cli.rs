use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hmpx_core::estimation::{MIN_BATCHES, MIN_MC_LENGTH};
use hmpx_core::series::{DEFAULT_LEMMA_TOLERANCE, DEFAULT_SETTLING_TOLERANCE};
use hmpx_core::DEFAULT_BUDGET;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "hmpx", version, about = "Entropy-rate Taylor coefficients of hidden Markov processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Model JSON file with `transition` and `noise` matrices.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Logarithm base of every reported entropy.
    #[arg(long, global = true, value_enum, default_value_t = LogBase::E)]
    pub log_base: LogBase,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Maximum number of observation sequences per enumeration.
    #[arg(long, global = true, env = "HMPX_BUDGET")]
    pub budget: Option<u64>,
    /// Worker threads for enumeration (defaults to the core count).
    #[arg(long, global = true)]
    pub workers: Option<NonZeroUsize>,
    /// Relative tolerance for settled-coefficient agreement.
    #[arg(long, global = true, default_value_t = DEFAULT_SETTLING_TOLERANCE)]
    pub settling_tol: f64,
    /// Absolute tolerance on lemma residuals, in nats.
    #[arg(long, global = true, default_value_t = DEFAULT_LEMMA_TOLERANCE)]
    pub lemma_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum LogBase {
    #[value(name = "e")]
    #[serde(rename = "e")]
    E,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Self::E => nats,
            Self::Two => nats / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Self::E => "nats",
            Self::Two => "bits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum LemmaChoice {
    #[value(name = "1")]
    #[serde(rename = "1")]
    Blocking,
    #[value(name = "2")]
    #[serde(rename = "2")]
    ZeroPrepend,
    #[value(name = "3")]
    #[serde(rename = "3")]
    NoHole,
    #[value(name = "all")]
    #[serde(rename = "all")]
    All,
}

impl LemmaChoice {
    pub fn includes(self, id: u8) -> bool {
        match self {
            Self::All => true,
            Self::Blocking => id == 1,
            Self::ZeroPrepend => id == 2,
            Self::NoHole => id == 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Entropy-rate Taylor coefficients up to --order.
    Expand {
        #[arg(long)]
        order: usize,
    },
    /// Finite-length coefficients C_N^(k) with settled flags.
    Table {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Block entropy H_N and conditional entropy C_N at one noise level.
    Entropy {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
    },
    /// Randomized lemma checks on the model.
    Verify {
        #[arg(long, value_enum, default_value_t = LemmaChoice::All)]
        lemma: LemmaChoice,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo entropy-rate estimate from one long sampled path.
    Mc {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long, default_value_t = 1_000_000)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = MIN_BATCHES)]
        batches: usize,
        /// Also evaluate the series of this order and report the z-score.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Upper and lower conditional-entropy bounds for N = 2..=n_max.
    Bounds {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long)]
        n_max: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Expand { .. } => "expand",
            Self::Table { .. } => "table",
            Self::Entropy { .. } => "entropy",
            Self::Verify { .. } => "verify",
            Self::Mc { .. } => "mc",
            Self::Bounds { .. } => "bounds",
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match *self {
            Self::Entropy { epsilon, .. } | Self::Mc { epsilon, .. } | Self::Bounds { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    }
}

/// Fully resolved invocation, embedded in every output document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub model: PathBuf,
    pub log_base: LogBase,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub budget: u64,
    pub workers: usize,
    pub chunks: usize,
    pub settling_tolerance: f64,
    pub lemma_tolerance: f64,
}

/// Contiguous ranges each enumeration is split into. Fixed so that results
/// are bit-identical for any worker count.
pub const ENUMERATION_CHUNKS: usize = 64;

impl RunConfig {
    /// Resolves defaults and checks every field that does not depend on the
    /// model.
    pub fn resolve(cli: Cli, default_workers: usize) -> Result<Self> {
        let common = cli.common;
        let model = common.model.ok_or_else(|| CliError::Validation("--model is required".into()))?;
        let config = Self {
            command: cli.command,
            model,
            log_base: common.log_base,
            format: common.format,
            out: common.out,
            budget: common.budget.unwrap_or(DEFAULT_BUDGET),
            workers: common.workers.map_or(default_workers, NonZeroUsize::get),
            chunks: ENUMERATION_CHUNKS,
            settling_tolerance: common.settling_tol,
            lemma_tolerance: common.lemma_tol,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(CliError::Validation(msg));
        for (name, v) in [("--settling-tol", self.settling_tolerance), ("--lemma-tol", self.lemma_tolerance)] {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.budget == 0 {
            return fail("--budget must be at least 1".into());
        }
        if self.workers == 0 {
            return fail("--workers must be at least 1".into());
        }
        if let Some(eps) = self.command.epsilon() {
            if !(eps.is_finite() && eps >= 0.0) {
                return fail(format!("--epsilon must be finite and nonnegative, got {eps}"));
            }
        }
        match self.command {
            Command::Table { n_max, .. } | Command::Bounds { n_max, .. } if n_max < 2 => {
                fail(format!("--n-max must be at least 2, got {n_max}"))
            }
            Command::Entropy { n: 0, .. } => fail("--n must be at least 1".into()),
            Command::Verify { trials: 0, .. } => fail("--trials must be at least 1".into()),
            Command::Mc { length, .. } if length < MIN_MC_LENGTH => {
                fail(format!("--length must be at least {MIN_MC_LENGTH}, got {length}"))
            }
            Command::Mc { length, batches, .. } if batches < MIN_BATCHES || batches > length => {
                fail(format!("--batches must be in [{MIN_BATCHES}, {length}], got {batches}"))
            }
            _ => Ok(()),
        }
    }
}
