use std::path::PathBuf;

use c2st::experiments::ExperimentKind;
use c2st::TestKind;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "c2st",
    version,
    about = "Classifier two-sample tests, classical baselines and cause-effect discovery"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print the JSON result envelope (default for every command but `power`).
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    /// Print a compact plain-text summary instead.
    #[arg(long, global = true)]
    pub table: bool,
    /// Seed of every random choice; drawn from the OS when absent and echoed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Significance level [default: 0.05].
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Fraction of the pooled rows the classifier tests train on [default: 0.5].
    #[arg(long, global = true)]
    pub split: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one two-sample test on two data files.
    Test(TestArgs),
    /// Approximate power of the classifier test.
    Power(PowerArgs),
    /// Run a synthetic benchmark and write its error tables.
    Bench(BenchArgs),
    /// Decide the causal direction of two-column pair files.
    Causal(CausalArgs),
    /// Explain where two samples differ from a fitted classifier test.
    Interpret(InterpretArgs),
}

/// Classifier settings shared by `test`, `bench` and `interpret`.
#[derive(Debug, Args, Clone, Default)]
pub struct ClassifierArgs {
    /// Hidden units of the neural classifier [default: 20].
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Training epochs of the neural classifier [default: 100].
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Mini-batch size of the neural classifier [default: 128].
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Adam step size [default: 0.001].
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Neighbours of the nearest-neighbour classifier [default: floor(sqrt(n_tr))].
    #[arg(long)]
    pub k: Option<usize>,
    /// Two-sided p-value for the classifier tests.
    #[arg(long)]
    pub two_sided: bool,
    /// Exact binomial null instead of its Gaussian approximation.
    #[arg(long)]
    pub exact_null: bool,
    /// Fixed Gaussian kernel bandwidth for mmd [default: median heuristic].
    #[arg(long)]
    pub bandwidth: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// First sample, one example per row.
    #[arg(long, required_unless_present = "replay")]
    pub x: Option<PathBuf>,
    /// Second sample, same number of rows and columns.
    #[arg(long, required_unless_present = "replay")]
    pub y: Option<PathBuf>,
    /// c2st-nn, c2st-knn, mmd, ks, kuiper or wmw.
    #[arg(long, default_value = "c2st-nn")]
    pub test: TestKind,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    /// Keep the fitted classifier in this directory for `interpret`.
    #[arg(long)]
    pub save_model: Option<PathBuf>,
    /// Re-run the configuration echoed in a previous envelope.
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Test-set size.
    #[arg(long, required_unless_present = "replay")]
    pub n_te: Option<usize>,
    /// Expected accuracy above chance, in (0, 1/2).
    #[arg(long, required_unless_present = "replay", allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// type1, gauss-student or sinusoid.
    #[arg(long, required_unless_present = "replay")]
    pub experiment: Option<ExperimentKind>,
    /// Sample sizes (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Student degrees of freedom (gauss-student).
    #[arg(long, value_delimiter = ',')]
    pub nu: Vec<f64>,
    /// Sinusoid frequencies.
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    /// Sinusoid noise levels.
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// Trials per cell [default: 100].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Tests to run (comma-separated) [default: all that apply].
    #[arg(long, value_delimiter = ',')]
    pub tests: Vec<TestKind>,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    /// Directory for the table files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CausalArgs {
    /// A two-column pair file, or a directory of them.
    #[arg(required_unless_present = "replay")]
    pub path: Option<PathBuf>,
    /// Ground truth: `<file> <X->Y|Y->X>` lines, or a Tübingen pairmeta file.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Generators trained per direction [default: 10].
    #[arg(long)]
    pub ensemble: Option<usize>,
    /// Training iterations per generator [default: 3000].
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Hidden units of generator and discriminator [default: 32].
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Generator mini-batch size [default: 64].
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Test scoring real against synthetic pairs [default: c2st-knn].
    #[arg(long)]
    pub scoring: Option<TestKind>,
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InterpretArgs {
    /// Directory written by `test --save-model`.
    #[arg(long, conflicts_with_all = ["x", "y"])]
    pub model: Option<PathBuf>,
    /// First sample, to fit the classifier inline.
    #[arg(long, requires = "y")]
    pub x: Option<PathBuf>,
    #[arg(long, requires = "x")]
    pub y: Option<PathBuf>,
    /// c2st-nn or c2st-knn when fitting inline.
    #[arg(long, default_value = "c2st-nn")]
    pub test: TestKind,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    /// Directory for the report files.
    #[arg(long, required_unless_present = "replay")]
    pub out: Option<PathBuf>,
    /// Examples listed per confident ranking.
    #[arg(long, default_value_t = 20)]
    pub top: usize,
    #[arg(long)]
    pub replay: Option<PathBuf>,
}
