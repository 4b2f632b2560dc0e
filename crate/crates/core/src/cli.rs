//! Argument layer of the `pivotgrad` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::adapt::{AdaptConfig, GradientMode, GroupingStrategy};
use crate::commands::{
    cmd_adapt, cmd_allocate, cmd_group, cmd_spectrum, cmd_verify, AdaptArgs, AllocateArgs, GroupArgs, VerifyArgs,
};
use crate::error::{Error, Result};
use crate::pools::PoolKind;
use crate::shots::AllocationRule;

#[derive(Debug, Parser)]
#[command(name = "pivotgrad", version, about = "Grouped measurement of ADAPT-VQE pool gradients")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build gradient groups and report their sizes.
    Group(GroupCmd),
    /// Per-group shot counts for a target gradient precision.
    Allocate(AllocateCmd),
    /// Run ADAPT-VQE. Exit code 0 converged, 2 iteration cap, 3 stalled.
    Adapt(AdaptCmd),
    /// Coefficient spectrum of a Hamiltonian as CSV.
    Spectrum(SpectrumCmd),
    /// Randomized self-checks of the grouping machinery.
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PoolArg {
    Qubit,
    Qeb,
    Fermionic,
    G,
}

impl From<PoolArg> for PoolKind {
    fn from(p: PoolArg) -> Self {
        match p {
            PoolArg::Qubit => PoolKind::Qubit,
            PoolArg::Qeb => PoolKind::Qeb,
            PoolArg::Fermionic => PoolKind::Fermionic,
            PoolArg::G => PoolKind::G,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Anchored,
    PerOperator,
    Greedy,
}

impl From<StrategyArg> for GroupingStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Anchored => GroupingStrategy::Anchored,
            StrategyArg::PerOperator => GroupingStrategy::PerOperator,
            StrategyArg::Greedy => GroupingStrategy::Greedy,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GradientModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleArg {
    Tight,
    WorstCase,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long, value_enum, default_value = "qubit")]
    pub pool: PoolArg,
    #[arg(long, value_enum, default_value = "anchored")]
    pub strategy: StrategyArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroupCmd {
    #[command(flatten)]
    pub common: Common,
    /// Also synthesize measurement circuits and count entangling gates.
    #[arg(long)]
    pub synthesize: bool,
}

#[derive(Debug, Args)]
pub struct AllocateCmd {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Defaults to worst-case for anchored groups, tight otherwise.
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
}

#[derive(Debug, Args)]
pub struct AdaptCmd {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "exact")]
    pub gradient_mode: GradientModeArg,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub grad_norm_tol: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated occupied qubits of the reference state, e.g. "0,1".
    #[arg(long, default_value = "")]
    pub reference_occupied: String,
}

#[derive(Debug, Args)]
pub struct SpectrumCmd {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    #[arg(long, default_value_t = 6)]
    pub qubits: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Add a non-commuting group; the run must then fail.
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `"0,1, 3"`; the empty string is the empty list.
pub fn parse_occupied(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad qubit index `{s}` in --reference-occupied")))
        })
        .collect()
}

/// Dispatches a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::InvalidArgument("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    match cli.command {
        Command::Group(c) => {
            cmd_group(&GroupArgs {
                hamiltonian: c.common.hamiltonian,
                pool: c.common.pool.into(),
                strategy: c.common.strategy.into(),
                synthesize: c.synthesize,
                out: c.common.out,
            })?;
            Ok(0)
        }
        Command::Allocate(c) => {
            cmd_allocate(&AllocateArgs {
                hamiltonian: c.common.hamiltonian,
                pool: c.common.pool.into(),
                strategy: c.common.strategy.into(),
                epsilon: c.epsilon,
                rule: c.rule.map(|r| match r {
                    RuleArg::Tight => AllocationRule::Tight,
                    RuleArg::WorstCase => AllocationRule::WorstCase,
                }),
                out: c.common.out,
            })?;
            Ok(0)
        }
        Command::Adapt(c) => {
            let config = AdaptConfig {
                pool_kind: c.common.pool.into(),
                grouping_strategy: c.common.strategy.into(),
                gradient_mode: match c.gradient_mode {
                    GradientModeArg::Exact => GradientMode::Exact,
                    GradientModeArg::Sampled => GradientMode::Sampled,
                },
                epsilon: c.epsilon,
                grad_norm_threshold: c.grad_norm_tol,
                max_iterations: c.max_iters,
                master_seed: c.seed,
                reference_occupied: parse_occupied(&c.reference_occupied)?,
                ..AdaptConfig::default()
            };
            cmd_adapt(&AdaptArgs {
                hamiltonian: c.common.hamiltonian,
                config,
                out: c.common.out,
            })
        }
        Command::Spectrum(c) => {
            cmd_spectrum(&c.hamiltonian, c.out.as_deref())?;
            Ok(0)
        }
        Command::Verify(c) => cmd_verify(&VerifyArgs {
            qubits: c.qubits,
            trials: c.trials,
            seed: c.seed,
            inject_corrupt_group: c.inject_fault,
            out: c.out,
        }),
    }
}
