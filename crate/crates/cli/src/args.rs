use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "netcorr",
    version,
    about = "Autocorrelation statistics for values on networks"
)]
pub struct Cli {
    /// Worker threads for null models (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Global autocorrelation statistic with null-model p-values.
    Global(GlobalArgs),
    /// Node Moran indices with per-node p-values.
    Local(LocalArgs),
    /// Lee's L and Pearson correlation of two columns.
    Bivar(BivarArgs),
    /// Moran index per hop distance.
    Correlogram(CorrelogramArgs),
    /// Moran scatter table and plot.
    Scatter(ScatterArgs),
    /// Generate a synthetic graph with propagated values.
    Synth(SynthArgs),
    /// Build a wiki link network and page metrics.
    Wiki(WikiArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NullChoice {
    Data,
    Config,
    Both,
    None,
}

impl NullChoice {
    pub fn data(self) -> bool {
        matches!(self, NullChoice::Data | NullChoice::Both)
    }

    pub fn config(self) -> bool {
        matches!(self, NullChoice::Config | NullChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailChoice {
    Upper,
    Lower,
    TwoSided,
}

impl From<TailChoice> for netcorr::Tail {
    fn from(t: TailChoice) -> Self {
        match t {
            TailChoice::Upper => netcorr::Tail::Upper,
            TailChoice::Lower => netcorr::Tail::Lower,
            TailChoice::TwoSided => netcorr::Tail::TwoSided,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// JSON document.
    Json,
    /// CSV table with a commented preamble.
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GlobalStat {
    Moran,
    Geary,
    Getis,
    Assort,
    Coscia,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Er,
    Planted,
    Karate,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge list: one `u v` pair per line, `#` comments.
    #[arg(long)]
    pub graph: PathBuf,
    /// Weight every node's own value alongside its neighbours'.
    #[arg(long)]
    pub self_loops: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ValueArgs {
    /// CSV with a label column followed by numeric columns.
    #[arg(long)]
    pub values: PathBuf,
    /// Take log10 of the values; non-positive values are masked.
    #[arg(long)]
    pub log10: bool,
}

#[derive(Debug, Clone, Args)]
pub struct NullArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub null: NullChoice,
    /// Replicates per null model.
    #[arg(long, default_value_t = 999)]
    pub nperm: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Accepted swaps per configuration replicate (default 10 per edge).
    #[arg(long)]
    pub swaps: Option<usize>,
    /// Highlight threshold for p-values; never filters output.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Result document path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Result format; defaults to csv for `.csv` paths and json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub values: ValueArgs,
    #[arg(long)]
    pub column: String,
    #[arg(long, value_enum, default_value = "moran")]
    pub stat: GlobalStat,
    /// Second column, for the two-variable coscia statistic.
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long, value_enum, default_value = "upper")]
    pub tail: TailChoice,
    #[command(flatten)]
    pub null: NullArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LocalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub values: ValueArgs,
    #[arg(long)]
    pub column: String,
    #[arg(long, value_enum, default_value = "two-sided")]
    pub tail: TailChoice,
    #[command(flatten)]
    pub null: NullArgs,
    /// Also render a histogram of the node indices.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BivarArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub values: ValueArgs,
    /// First column; the one permuted under the data null.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long, value_enum, default_value = "upper")]
    pub tail: TailChoice,
    #[command(flatten)]
    pub null: NullArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelogramArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub values: ValueArgs,
    #[arg(long)]
    pub column: String,
    /// Largest hop distance.
    #[arg(long, default_value_t = 5)]
    pub dmax: usize,
    /// Row-normalize each distance class.
    #[arg(long)]
    pub row_normalized: bool,
    #[arg(long, value_enum, default_value = "upper")]
    pub tail: TailChoice,
    #[command(flatten)]
    pub null: NullArgs,
    /// Also render the correlogram.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub values: ValueArgs,
    #[arg(long)]
    pub column: String,
    /// Label points whose residual exceeds this many standard deviations.
    #[arg(long, default_value_t = 2.0)]
    pub outliers: f64,
    /// Node p-values (conditional permutation) for solid/open markers.
    #[arg(long)]
    pub pvalues: bool,
    #[arg(long, default_value_t = 999)]
    pub nperm: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Also render the scatter plot.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Edge probability of the random graph.
    #[arg(long, default_value_t = 0.08)]
    pub p: f64,
    #[arg(long, default_value_t = 4)]
    pub blocks: usize,
    #[arg(long, default_value_t = 0.3)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p_out: f64,
    /// Label of the propagation source (default: the first node).
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.1)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for graph.txt and values.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct WikiArgs {
    #[arg(long)]
    pub seed_page: String,
    /// Calendar month for page views, YYYY-MM.
    #[arg(long)]
    pub month: String,
    #[arg(long, env = "NETCORR_CACHE_DIR")]
    pub cache_dir: PathBuf,
    #[arg(long, default_value = netcorr_wiki::DEFAULT_USER_AGENT)]
    pub user_agent: String,
    /// Serve from the cache only.
    #[arg(long)]
    pub offline: bool,
    /// Request ceiling per second.
    #[arg(long, default_value_t = 10.0)]
    pub rate_limit: f64,
    /// Seeds the retry jitter.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for edges.txt, metrics.csv, pages.csv and network.json.
    #[arg(long)]
    pub out: PathBuf,
}
