use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "latcomb", version, about = "Lattice combination and WFST tools for lightly supervised training")]
pub struct Cli {
    /// Worker threads for per-utterance commands (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Stop at the first failing utterance and write no outputs.
    #[arg(long, global = true)]
    pub fail_fast: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Merge transcripts with hypothesis lattices into supervision lattices.
    Combine(CombineArgs),
    /// Keep the arcs on paths within a threshold of each lattice's best path.
    Prune(PruneArgs),
    /// Compose each lattice with a grammar FST to put LM costs back.
    Rescore(RescoreArgs),
    /// Partition utterances by matching error rate between transcript and decode.
    MerFilter(MerFilterArgs),
    /// Posterior-weighted expected WER of each lattice against a reference.
    ExpectedWer(ExpectedWerArgs),
    /// Best WER reachable by any path of each lattice.
    OracleWer(LatticeRefArgs),
    /// Structural depth, path, state and arc counts of each lattice.
    Depth(DepthArgs),
    /// Estimate a Witten–Bell back-off n-gram model from a text corpus.
    LmTrain(LmTrainArgs),
    /// Linearly interpolate an in-domain model with a background model.
    LmInterpolate(LmInterpolateArgs),
    /// Convert an ARPA model to a grammar acceptor.
    LmToFst(LmToFstArgs),
    /// Subtract a constant from every word-emitting arc of an FST.
    WordReward(WordRewardArgs),
    /// Generate a synthetic corpus of references, transcripts and lattices.
    Simulate(SimulateArgs),
    /// Convert between numeric and symbolic FST text, optionally applying operations.
    FstConvert(FstConvertArgs),
}

#[derive(Debug, Args)]
pub struct EditCostArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub insertion_cost: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub deletion_cost: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub substitution_cost: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub match_cost: f64,
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    /// Transcript file: `utt-id w1 w2 ...` per line.
    #[arg(long)]
    pub transcripts: PathBuf,
    /// Hypothesis lattice archive.
    #[arg(long)]
    pub lattices: PathBuf,
    /// Symbol table shared by the lattices.
    #[arg(long)]
    pub syms: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Pruning threshold t on top of the best alignment cost (0 keeps only
    /// the alignments with the most matches).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub threshold: f64,
    /// Keep the residual alignment costs instead of stripping them.
    #[arg(long)]
    pub keep_weights: bool,
    /// Build the edit transducer explicitly instead of on the fly.
    #[arg(long)]
    pub explicit_edit: bool,
    #[command(flatten)]
    pub costs: EditCostArgs,
}

#[derive(Debug, Args)]
pub struct PruneArgs {
    #[arg(long)]
    pub lattices: PathBuf,
    #[arg(long)]
    pub syms: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct RescoreArgs {
    #[arg(long)]
    pub lattices: PathBuf,
    /// Symbol table of the lattices.
    #[arg(long)]
    pub syms: PathBuf,
    /// Grammar FST in numeric AT&T text.
    #[arg(long)]
    pub grammar: PathBuf,
    /// Symbol table of the grammar, when it differs from the lattices'.
    #[arg(long)]
    pub grammar_syms: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MerFilterArgs {
    #[arg(long)]
    pub transcripts: PathBuf,
    /// Best-path decodes in transcript format.
    #[arg(long)]
    pub decodes: PathBuf,
    /// Maximum matching error rate, in percent.
    #[arg(long, default_value_t = 40.0)]
    pub threshold: f64,
    #[arg(long)]
    pub kept: PathBuf,
    #[arg(long)]
    pub dropped: PathBuf,
    /// Per-utterance report (default: stdout).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LatticeRefArgs {
    #[arg(long)]
    pub lattices: PathBuf,
    #[arg(long)]
    pub syms: PathBuf,
    /// References in transcript format.
    #[arg(long)]
    pub refs: PathBuf,
    /// Report file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpectedWerArgs {
    #[command(flatten)]
    pub common: LatticeRefArgs,
    /// Enumerate exactly up to this many paths; sample beyond it.
    #[arg(long, default_value_t = 10_000)]
    pub cap: usize,
    /// Posterior samples for lattices above the cap.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fail instead of sampling when a lattice exceeds the cap.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    #[arg(long)]
    pub lattices: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LmTrainArgs {
    /// One sentence per line, whitespace-tokenized.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value_t = 150_000)]
    pub vocab_cap: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LmInterpolateArgs {
    /// In-domain model (ARPA).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Background model (ARPA).
    #[arg(long)]
    pub bg: PathBuf,
    /// Weight of the in-domain model.
    #[arg(long, default_value_t = 0.7)]
    pub lambda: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LmToFstArgs {
    #[arg(long)]
    pub arpa: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Write the grammar's symbol table here.
    #[arg(long)]
    pub syms_out: Option<PathBuf>,
    /// Express the grammar over this table instead (e.g. the lattices').
    #[arg(long)]
    pub syms: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WordRewardArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Cost subtracted from every word arc; must be non-negative.
    #[arg(long, allow_negative_numbers = true)]
    pub reward: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Directory receiving words.txt, refs.txt, transcripts.txt, lattices.ark.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 500)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub vocab_size: usize,
    #[arg(long, default_value_t = 8)]
    pub min_len: usize,
    #[arg(long, default_value_t = 15)]
    pub max_len: usize,
    #[arg(long, default_value_t = 0.15)]
    pub p_delete: f64,
    #[arg(long, default_value_t = 0.15)]
    pub p_substitute: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p_insert: f64,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 0.6)]
    pub q: f64,
    #[arg(long, default_value_t = 0.05)]
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FstOp {
    /// Remove epsilon arcs.
    Rmeps,
    /// Determinize (acyclic, epsilon-free acceptors).
    Det,
    /// Minimize (acyclic deterministic acceptors).
    Min,
    /// Project onto the output tape.
    Proj,
    /// Remove states off every accepting path.
    Trim,
    /// Set every weight to 0.
    Unweight,
}

#[derive(Debug, Args)]
pub struct FstConvertArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Symbol table for symbolic input or output.
    #[arg(long)]
    pub syms: Option<PathBuf>,
    #[arg(long)]
    pub symbolic_in: bool,
    #[arg(long)]
    pub symbolic_out: bool,
    /// Operations applied in order, comma-separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub ops: Vec<FstOp>,
}
