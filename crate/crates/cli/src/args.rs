use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "lgx", version, about = "Local-to-global logical explanations for black-box classifiers")]
pub struct Cli {
    /// File of `key = value` lines supplying flags; `[subcommand]` sections
    /// apply to one subcommand only. Command-line flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic dataset and the model that labels it
    Gen(GenArgs),
    /// Find minimally sufficient concept sets for every instance
    Explain(ExplainArgs),
    /// Build a monotone DNF cover per class from the support split
    Cover(CoverArgs),
    /// Build a multi-class explanation list from the support split
    Mclist(ListArgs),
    /// Fidelity, coverage curves and list accuracy
    Eval(EvalArgs),
    /// Brute-force cross-checks; exits with status 3 on any violation
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct OutDir {
    /// Directory for outputs; also where inputs are looked up by default
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out_dir: PathBuf,
}

impl OutDir {
    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn or_default(&self, given: &Option<PathBuf>, name: &str) -> PathBuf {
        given.clone().unwrap_or_else(|| self.path(name))
    }
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct GenArgs {
    #[arg(long, default_value_t = 5)]
    pub classes: usize,
    /// Vocabulary size
    #[arg(long = "vocab", default_value_t = 40)]
    pub vocab_size: usize,
    #[arg(long, default_value_t = 50)]
    pub per_class: usize,
    #[arg(long, default_value_t = 3)]
    pub min_objects: usize,
    #[arg(long, default_value_t = 8)]
    pub max_objects: usize,
    /// Probability that a class-concept weight is zero
    #[arg(long, default_value_t = 0.6)]
    pub sparsity: f64,
    /// Sampling mass of concepts outside the class support
    #[arg(long, default_value_t = 0.05)]
    pub background: f64,
    /// Give each class this many near-equal dominant concepts
    #[arg(long)]
    pub dominant: Option<usize>,
    /// Give each class its own block of the vocabulary
    #[arg(long)]
    pub disjoint: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Build a dataset with a planted zero-error explanation list instead
    #[arg(long)]
    pub planted: bool,
    #[arg(long, default_value_t = 6)]
    pub markers: usize,
    #[arg(long, default_value_t = 6)]
    pub noise_concepts: usize,
    #[arg(long, default_value_t = 3)]
    pub max_antecedent: usize,
    #[arg(long, default_value_t = 3)]
    pub max_noise_objects: usize,
    /// Planted antecedents form a chain
    #[arg(long)]
    pub nested: bool,

    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Args, Debug, Serialize)]
pub struct DataArgs {
    /// Dataset file [default: OUT_DIR/dataset.jsonl]
    #[arg(long, value_name = "PATH")]
    pub dataset: Option<PathBuf>,
    /// Vocabulary file [default: OUT_DIR/vocab.json]
    #[arg(long, value_name = "PATH")]
    pub vocab: Option<PathBuf>,
    /// Extra class name known to the oracle but absent from the dataset
    #[arg(long = "extra-class", value_name = "NAME")]
    pub extra_classes: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct OracleArgs {
    /// Synthetic model file [default: OUT_DIR/model.json when no oracle is given]
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Precomputed score table (JSON lines)
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Adapter program speaking the line-delimited JSON protocol
    #[arg(long, value_name = "PROGRAM")]
    pub oracle_cmd: Option<String>,
    /// Argument for the adapter program (repeatable)
    #[arg(long = "oracle-arg", value_name = "ARG", allow_hyphen_values = true)]
    pub oracle_args: Vec<String>,
    /// Seconds to wait for each adapter response
    #[arg(long, env = "LGX_ORACLE_TIMEOUT", default_value_t = 30.0)]
    pub oracle_timeout: f64,
    /// Bound the score cache to this many entries (LRU)
    #[arg(long)]
    pub cache_capacity: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct SplitArgs {
    #[arg(long, default_value_t = 0)]
    pub split_seed: u64,
    /// Fraction of instances in the support split
    #[arg(long, default_value_t = 0.8)]
    pub support_fraction: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Sufficiency ratio
    #[arg(long, default_value_t = 0.95)]
    pub tau: f64,
    #[arg(long, default_value_t = 3)]
    pub beam: usize,
    /// Successors kept per frontier set; 0 keeps all
    #[arg(long, default_value_t = 5)]
    pub successors: usize,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Enumerate every subset instead of beam search
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 15)]
    pub exact_k_limit: usize,
    /// Worker threads; 0 uses one per core
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Display {
    Marginal,
    Total,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct CoverArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Explanations file [default: OUT_DIR/explanations.jsonl]
    #[arg(long, value_name = "PATH")]
    pub explanations: Option<PathBuf>,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Which clause percentage the formula shows
    #[arg(long, value_enum, default_value_t = Display::Marginal)]
    pub display: Display,
    /// Hide clauses below this percentage in the formula
    #[arg(long, default_value_t = 0.0)]
    pub min_pct: f64,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct ListArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Explanations file [default: OUT_DIR/explanations.jsonl]
    #[arg(long, value_name = "PATH")]
    pub explanations: Option<PathBuf>,
    #[command(flatten)]
    pub split: SplitArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Presence,
    Mscx,
}

impl From<Mode> for lgx_core::MatchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Presence => lgx_core::MatchMode::Presence,
            Mode::Mscx => lgx_core::MatchMode::Mscx,
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    /// Explanations file [default: OUT_DIR/explanations.jsonl]
    #[arg(long, value_name = "PATH")]
    pub explanations: Option<PathBuf>,
    /// Evaluate this explanation list instead of rebuilding it from the support split
    #[arg(long, value_name = "PATH")]
    pub list: Option<PathBuf>,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Matching used for the coverage CSV
    #[arg(long, value_enum, default_value_t = Mode::Mscx)]
    pub coverage_mode: Mode,
    /// Also write per-instance fidelities
    #[arg(long)]
    pub verbose: bool,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    /// Seeds per synthetic suite
    #[arg(long, default_value_t = 100)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub start_seed: u64,
    /// Largest object count in the search cross-check
    #[arg(long, default_value_t = 10)]
    pub max_k: usize,
    #[arg(long, default_value_t = 0.95)]
    pub tau: f64,
    /// Skip the synthetic suites and check only the given artifacts
    #[arg(long)]
    pub skip_synthetic: bool,
    /// Explanations to check for soundness against the oracle
    #[arg(long, value_name = "PATH")]
    pub explanations: Option<PathBuf>,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[arg(long, default_value_t = 15)]
    pub exact_k_limit: usize,
    #[command(flatten)]
    pub out: OutDir,
}
