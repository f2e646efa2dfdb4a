//! `tsinorm`: exact norms, dual norms and norming sets of Tsirelson-type spaces.

mod commands;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tsinorm_core::{Error as CoreError, MixedSpaceSpec, SpaceConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Violation(_) => 1,
            CliError::Core(e) => match e {
                CoreError::BudgetExceeded { .. } | CoreError::PrecisionExhausted(_) => 3,
                CoreError::Inconsistent(_) => 1,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "tsinorm", version, about = "Exact norms and dual norms of Tsirelson-type spaces")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Preset name (tsirelson, schlumprecht) or path to a JSON space config.
    #[arg(long, global = true, default_value = "tsirelson")]
    pub space: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Largest θ precision in bits for irrational coefficients.
    #[arg(long, global = true, default_value_t = tsinorm_core::DEFAULT_PRECISION_CAP)]
    pub precision_cap: u32,
    /// Signed-functional budget for norming sets.
    #[arg(long, global = true, env = "TSINORM_BUDGET", default_value_t = tsinorm_core::DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a norm at a vector literal such as "3:1 4:1 5:-1/2".
    Norm {
        #[arg(value_enum)]
        kind: NormKind,
        #[arg(default_value = "")]
        vector: String,
        /// Include the certificate.
        #[arg(long)]
        certify: bool,
        /// Requested enclosure width 2^-bits for irrational coefficients.
        #[arg(long, default_value_t = 32)]
        target_bits: u32,
    },
    /// Growth of norms of sums of basis vectors, as CSV.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 8)]
        to: usize,
        #[arg(long, value_enum, default_value_t = TableNorm::Mixed)]
        norm: TableNorm,
    },
    /// Run a property suite over grid vectors supported in [1, support].
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        support: usize,
        /// Seeded pairs for the triangle inequality.
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        /// Round cap for the ell1 variant.
        #[arg(long, default_value_t = 32)]
        cap: usize,
        /// Comma-separated entry grid, e.g. "1,-1,1/2,-1/2".
        #[arg(long)]
        grid: Option<String>,
    },
    /// Build and export the norming set on [1, window].
    NormingSet {
        #[arg(long)]
        window: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Emit a certificate document, or re-verify one with --check.
    Certify {
        #[arg(long, value_enum, default_value_t = CertKind::Primal)]
        kind: CertKind,
        #[arg(required_unless_present = "check")]
        vector: Option<String>,
        #[arg(long, conflicts_with = "vector")]
        check: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Fj,
    Mixed,
    Dual,
    DualBounds,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// `‖e_1 + ... + e_n‖`.
    SchreierBlockGrowth,
    /// `‖e_n + ... + e_{2n-1}‖`.
    BasisGrowth,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableNorm {
    Fj,
    Mixed,
    Dual,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Duality,
    ImplicitEq,
    Ell1Falsify,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    Primal,
    Dual,
}

/// Resolves `--space` to a spec: presets first, then config files.
pub fn resolve_space(name: &str) -> CliResult<MixedSpaceSpec> {
    if let Some(spec) = MixedSpaceSpec::preset(name) {
        return Ok(spec);
    }
    let path = std::path::Path::new(name);
    if !path.is_file() {
        return Err(CliError::Usage(format!(
            "unknown space `{name}`: expected tsirelson, schlumprecht or a config file"
        )));
    }
    let text = std::fs::read_to_string(path)?;
    Ok(SpaceConfig::from_json(&text)?.to_spec()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tsinorm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
