//! Command-line front end.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use grid::NGrid;

use chaosnorm::coefficients::{cache_dir_from_env, CachePolicy};
use chaosnorm::stein::KernelForm;

/// Exact chaos expansion of the self-normalized Gaussian sum and the
/// Stein-Malliavin Berry-Esseen bound built from it.
#[derive(Debug, Parser)]
#[command(name = "chaosnorm", version)]
pub struct Cli {
    /// Write the CSV here instead of stdout. Nothing is written on failure.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Coefficient cache directory [env: CHAOSNORM_CACHE_DIR, default ./.chaosnorm-cache].
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Keep coefficient tables in memory only.
    #[arg(long, global = true, conflicts_with = "refresh_cache")]
    pub no_cache: bool,

    /// Recompute coefficients and overwrite cache files.
    #[arg(long, global = true)]
    pub refresh_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chaos coefficients per pattern, by two exact paths and optionally Monte Carlo.
    Coeffs(CoeffsArgs),
    /// Partial sums of the chaos norm identity.
    Norm(NormArgs),
    /// Asymptotic constants and decay fits per pattern.
    Asymptotics(AsymptoticsArgs),
    /// Truncated discrepancy and the Berry-Esseen bounds over an n-grid.
    Bound(BoundArgs),
    /// Empirical distances of F_n to the standard normal.
    Simulate(SimulateArgs),
    /// Bounds joined with empirical distances.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Dims {
    /// A single dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimensions as start:end:linear|geometric, endpoints inclusive.
    #[arg(long)]
    pub n_grid: Option<NGrid>,
}

impl Dims {
    pub fn points(&self) -> Vec<usize> {
        match (&self.n, &self.n_grid) {
            (Some(n), _) => vec![*n],
            (None, Some(g)) => g.points(),
            (None, None) => Vec::new(),
        }
    }

    fn describe(&self) -> String {
        match (&self.n, &self.n_grid) {
            (Some(n), _) => format!("n={n}"),
            (None, Some(g)) => format!(
                "n_grid={}:{}:{}",
                g.start,
                g.end,
                match g.spacing {
                    grid::Spacing::Linear => "linear",
                    grid::Spacing::Geometric => "geometric",
                }
            ),
            (None, None) => String::new(),
        }
    }
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub dims: Dims,
    /// Largest k; patterns of odd order up to 2k+1 are listed.
    #[arg(long, default_value_t = 2)]
    pub max_k: u32,
    /// Monte Carlo draws per dimension; 0 leaves the MC columns empty.
    #[arg(long, default_value_t = 0)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[arg(long, default_value_t = 6)]
    pub max_k: u32,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    /// Largest k; every non-vanishing pattern of order up to 2k+1 is fitted.
    #[arg(long, default_value_t = 2)]
    pub max_k: u32,
    #[arg(long, default_value = "100:1600:geometric")]
    pub n_grid: NGrid,
}

#[derive(Debug, Args)]
pub struct Truncations {
    /// Highest kernel order m kept in the discrepancy.
    #[arg(long, default_value_t = 2)]
    pub m_max: u32,
    /// Highest contraction order r kept in each kernel.
    #[arg(long, default_value_t = 4)]
    pub r_max: u32,
    /// Kernel form entering the quadratic form.
    #[arg(long, value_enum, default_value_t = KernelFormArg::Symmetrized)]
    pub kernel: KernelFormArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelFormArg {
    Symmetrized,
    Literal,
}

impl From<KernelFormArg> for KernelForm {
    fn from(k: KernelFormArg) -> Self {
        match k {
            KernelFormArg::Symmetrized => KernelForm::Symmetrized,
            KernelFormArg::Literal => KernelForm::Literal,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[command(flatten)]
    pub truncations: Truncations,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[command(flatten)]
    pub truncations: Truncations,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Failure classes, mapped to exit codes 2 and 3.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<chaosnorm::Error> for Failure {
    fn from(e: chaosnorm::Error) -> Self {
        Failure::Compute(e.into())
    }
}

impl Cli {
    fn cache_policy(&self) -> CachePolicy {
        let dir = self.cache_dir.clone().unwrap_or_else(cache_dir_from_env);
        if self.no_cache {
            CachePolicy::Disabled
        } else if self.refresh_cache {
            CachePolicy::Refresh(dir)
        } else {
            CachePolicy::ReadWrite(dir)
        }
    }

    /// Validates, computes, and writes the output. All parameter checks
    /// happen before any computation.
    pub fn run(&self) -> Result<(), Failure> {
        let text = commands::execute(self)?;
        output::emit(&text, self.output.as_deref())?;
        Ok(())
    }
}
