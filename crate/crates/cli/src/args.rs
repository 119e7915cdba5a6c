use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "netstab",
    version,
    about = "Ranking stability of local centralities under degree-preserving rewiring"
)]
pub struct Cli {
    /// Worker threads for per-node and per-seed parallel sections.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic scale-free or exponential network.
    Generate(GenerateArgs),
    /// Score nodes with one or more centrality measures.
    Centrality(CentralityArgs),
    /// Apply a degree-preserving noise model to a network.
    Perturb(PerturbArgs),
    /// Compare rankings before and after perturbation over one or more seeds.
    Stability(StabilityArgs),
    /// Track top-k overlap while steering assortativity.
    Sweep(SweepArgs),
    /// Render SVG figures from stability and sweep outputs.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    ScaleFree,
    Exponential,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// RNG seed.
    #[arg(long, env = "NETSTAB_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long)]
    pub nodes: usize,
    /// Power-law exponent (scale-free).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Target mean degree (exponential).
    #[arg(long)]
    pub mean_degree: Option<f64>,
    /// Minimum degree; defaults to 2 for scale-free and 1 for exponential.
    #[arg(long)]
    pub k_min: Option<usize>,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Edge-list output; metadata goes next to it as `<stem>.meta.json`.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CentralityArgs {
    /// Edge-list file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Comma-separated measure ids (h, lc, lse, lcc, tc, lac) or `all`.
    #[arg(long, default_value = "all")]
    pub measure: String,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Increase,
    Decrease,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Noise model: 1 = uniform swaps, 2 = assortativity-steered.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub model: u8,
    /// Successful rewires: `auto` or an integer.
    #[arg(long, default_value = "auto")]
    pub steps: String,
    /// Required with model 2.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Attempts allowed per successful rewire before giving up.
    #[arg(long, default_value_t = netstab::randomize::DEFAULT_MAX_ATTEMPTS_FACTOR)]
    pub max_attempts_factor: u64,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Assortativity readings recorded in the trace (model 2).
    #[arg(long, default_value_t = 1)]
    pub checkpoints: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Perturbed edge list.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Trace JSON; defaults to `<stem>.trace.json` next to the output.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeedListArgs {
    /// Base seed.
    #[arg(long, env = "NETSTAB_SEED")]
    pub seed: Option<u64>,
    /// Explicit comma-separated seed list; overrides --seed/--runs.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    /// Number of runs using seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value = "all")]
    pub measure: String,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    pub seeds: SeedListArgs,
    #[arg(long, default_value_t = 25)]
    pub top_k: usize,
    /// Report file.
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
    /// Directory for per-(measure, seed) scatter CSVs; defaults to the
    /// report's directory.
    #[arg(long)]
    pub scatter_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value = "all")]
    pub measure: String,
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    /// Last checkpoint: `auto` (same count as noise model 1) or an integer.
    #[arg(long, default_value = "auto")]
    pub max_steps: String,
    /// Evenly spaced checkpoints from 0 to --max-steps.
    #[arg(long, default_value_t = 5)]
    pub checkpoints: usize,
    /// Explicit checkpoint swap counts; overrides --max-steps/--checkpoints.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<u64>,
    #[arg(long, default_value_t = netstab::randomize::DEFAULT_MAX_ATTEMPTS_FACTOR)]
    pub max_attempts_factor: u64,
    #[command(flatten)]
    pub seeds: SeedListArgs,
    #[arg(long, default_value_t = 25)]
    pub top_k: usize,
    /// Sweep CSV; multi-seed runs are averaged per checkpoint.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// Original vs perturbed rank, from a scatter CSV.
    Scatter,
    /// 1/mu and 1/sigma per measure, from a stability report.
    Bars,
    /// Jaccard vs swap count per measure, from a sweep CSV.
    Sweep,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Only `svg` is supported.
    #[arg(long, default_value = "svg")]
    pub format: String,
}
