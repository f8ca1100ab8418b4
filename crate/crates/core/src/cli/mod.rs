//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 on a runtime failure, 2 on a usage or
//! configuration problem.

mod commands;
mod config;
mod guard;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{EvalSummary, ManifestRun, PlotRow, TrainManifest, METHODS};
pub use config::{ContextConfig, ExperimentConfig, GridConfig, MatchConfig, MixConfig};
pub use guard::OutputGuard;

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "ctxsim", version, about = "Context-restricted embeddings and similarity evaluation")]
pub struct Cli {
    /// Experiment config (JSON). Flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for mixing, frequency matching and bootstrap resampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 1 gives bitwise-reproducible training.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, mix, frequency-match or inspect corpora.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Train one space per grid point and seed.
    Train(TrainArgs),
    /// Project test items onto feature axes.
    Project(ProjectArgs),
    /// Predict similarity judgments and score them against human data.
    Eval(EvalArgs),
    /// Collect evaluation reports into one table.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    Build(BuildArgs),
    Mix(MixArgs),
    Match(MatchArgs),
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub articles: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Root categories to collect; without them every configured context is built.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub include: Vec<String>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub exclude: Vec<String>,
    /// Roots of another context whose articles are removed from this one.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub overlap_with: Vec<String>,
    /// Token cap, applied at article boundaries.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long, default_value = "corpus")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct MixArgs {
    #[arg(long)]
    pub a: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Share of corpus A kept; corpus B contributes `1 − fraction` of itself.
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub targets: Vec<String>,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Words to count; defaults to every configured or built-in test item.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub words: Vec<String>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub windows: Vec<usize>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub dims: Vec<usize>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub min_count: Option<u64>,
    #[arg(long)]
    pub negatives: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub subsample: Option<f64>,
    #[arg(long)]
    pub dynamic_window: bool,
    /// Also write the binary cache next to each text file.
    #[arg(long)]
    pub binary: bool,
}

/// Which vector files to use.
#[derive(Debug, Args)]
pub struct VectorSource {
    /// Explicit vector files (text, or `.bin` cache).
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub vectors: Vec<PathBuf>,
    /// Training manifest; selects runs by corpus, window and dim.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<String>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub source: VectorSource,
    #[arg(long)]
    pub context: String,
    #[arg(long)]
    pub mode: Option<crate::projection::AnchorMode>,
    #[arg(long)]
    pub anchors: Option<PathBuf>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub items: Vec<String>,
    /// Human feature ratings to correlate with the projections.
    #[arg(long)]
    pub feature_ratings: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: VectorSource,
    #[arg(long)]
    pub context: String,
    #[arg(long)]
    pub judgments: Option<PathBuf>,
    /// cosine, subspace-cosine, proj-regression, rawdim-regression.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub methods: Vec<String>,
    #[arg(long)]
    pub mode: Option<crate::projection::AnchorMode>,
    #[arg(long)]
    pub anchors: Option<PathBuf>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub items: Vec<String>,
    #[arg(long)]
    pub n_boot: Option<usize>,
    #[arg(long)]
    pub correlation: Option<crate::eval::CorrelationMethod>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub squared: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Evaluation reports; defaults to every `eval_*.json` in the output directory.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub inputs: Vec<PathBuf>,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Runtime(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
