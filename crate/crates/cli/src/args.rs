use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pprpaths",
    version,
    about = "Seeded PageRank solution paths and best-conductance sweep sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustive solution path over eps with a sweep at every new accuracy.
    Path(PathArgs),
    /// Solutions on a geometric eps grid, one sweep record per grid point.
    Grid(GridArgs),
    /// One push run at a single accuracy.
    Single(SingleArgs),
    /// Sweep a value vector, or re-score the best set of a results file.
    Sweep(SweepArgs),
    /// Dense reference PageRank for small graphs.
    Exact(ExactArgs),
    /// Push-count and conductance comparison over random seed nodes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormatArg {
    EdgeList,
    MatrixMarket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OverflowArg {
    Error,
    Downsample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DisciplineArg {
    Fifo,
    Lifo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Auto,
    Direct,
    Power,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file: edge list (0-based `u v` per line) or Matrix Market.
    #[arg(long, env = "PPRPATHS_GRAPH")]
    pub graph: PathBuf,

    /// Graph format; `.mtx` files default to matrix-market, anything else to edge-list.
    #[arg(long = "graph-format", value_enum, env = "PPRPATHS_GRAPH_FORMAT")]
    pub graph_format: Option<GraphFormatArg>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Results file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json", env = "PPRPATHS_FORMAT")]
    pub format: OutputFormat,

    /// Omit wall-clock times so repeated runs produce identical bytes.
    #[arg(long, env = "PPRPATHS_DETERMINISTIC")]
    pub deterministic: bool,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Seed node (repeat for a seed set).
    #[arg(long = "seed", required = true)]
    pub seeds: Vec<usize>,

    #[arg(long, default_value_t = 0.99, env = "PPRPATHS_ALPHA")]
    pub alpha: f64,

    /// Fraction of the current accuracy left behind at a pushed node
    /// [default: 0.9 with --traj, 0 otherwise].
    #[arg(long, env = "PPRPATHS_RHO")]
    pub rho: Option<f64>,

    #[arg(long = "eps-min", default_value_t = 1e-5, env = "PPRPATHS_EPS_MIN")]
    pub eps_min: f64,

    #[arg(long = "eps-max", default_value_t = 1e-1, env = "PPRPATHS_EPS_MAX")]
    pub eps_max: f64,

    /// Cap on stored events.
    #[arg(long = "max-events", env = "PPRPATHS_MAX_EVENTS")]
    pub max_events: Option<usize>,

    #[arg(long = "on-overflow", value_enum, default_value = "downsample")]
    pub on_overflow: OverflowArg,

    /// Trajectory CSV (`node,eps,value`), one row per solution change.
    #[arg(long)]
    pub traj: Option<PathBuf>,

    /// Write every node's value at every stored event instead of changes only.
    #[arg(long = "dense-traj", requires = "traj")]
    pub dense_traj: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    #[arg(long = "seed", required = true)]
    pub seeds: Vec<usize>,

    #[arg(long, default_value_t = 0.99, env = "PPRPATHS_ALPHA")]
    pub alpha: f64,

    #[arg(long, default_value_t = 1e-1, env = "PPRPATHS_EPS0")]
    pub eps0: f64,

    /// Grid ratio; when absent the grid is spread from eps0 down to --eps-min.
    #[arg(long, env = "PPRPATHS_THETA")]
    pub theta: Option<f64>,

    /// Number of grid steps N; records are produced for k = 0..=N.
    #[arg(long = "num-eps", default_value_t = 32, env = "PPRPATHS_NUM_EPS")]
    pub num_eps: usize,

    #[arg(long = "eps-min", default_value_t = 1e-5, env = "PPRPATHS_EPS_MIN")]
    pub eps_min: f64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SingleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    #[arg(long = "seed", required = true)]
    pub seeds: Vec<usize>,

    #[arg(long, default_value_t = 0.99, env = "PPRPATHS_ALPHA")]
    pub alpha: f64,

    #[arg(long, default_value_t = 0.0, env = "PPRPATHS_RHO")]
    pub rho: f64,

    /// Target accuracy.
    #[arg(long, default_value_t = 1e-5, env = "PPRPATHS_EPS_MIN")]
    pub eps: f64,

    #[arg(long, value_enum, default_value = "fifo")]
    pub discipline: DisciplineArg,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// CSV of `node,value` rows to sweep.
    #[arg(
        long,
        conflicts_with = "set_from",
        required_unless_present = "set_from"
    )]
    pub values: Option<PathBuf>,

    /// Results JSON from `path`, `grid` or `single`; its best set is re-scored.
    #[arg(long = "set-from")]
    pub set_from: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    #[arg(long = "seed", required = true)]
    pub seeds: Vec<usize>,

    #[arg(long, default_value_t = 0.99, env = "PPRPATHS_ALPHA")]
    pub alpha: f64,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,

    #[arg(long, value_enum, default_value = "auto")]
    pub solver: SolverArg,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Number of distinct seed nodes drawn uniformly at random.
    #[arg(long, default_value_t = 100, env = "PPRPATHS_TRIALS")]
    pub trials: usize,

    #[arg(long = "rng-seed", default_value_t = 0, env = "PPRPATHS_RNG_SEED")]
    pub rng_seed: u64,

    #[arg(long, default_value_t = 0.99, env = "PPRPATHS_ALPHA")]
    pub alpha: f64,

    #[arg(long = "eps-min", default_value_t = 1e-5, env = "PPRPATHS_EPS_MIN")]
    pub eps_min: f64,

    #[arg(long, default_value_t = 1e-1, env = "PPRPATHS_EPS0")]
    pub eps0: f64,

    #[arg(long = "num-eps", default_value_t = 32, env = "PPRPATHS_NUM_EPS")]
    pub num_eps: usize,

    /// Also run the naive baseline at eps = 1/k for k = 1..=10000.
    #[arg(long = "with-mult")]
    pub with_mult: bool,

    /// Worker threads; 0 lets the pool decide.
    #[arg(long, default_value_t = 0, env = "PPRPATHS_THREADS")]
    pub threads: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}
