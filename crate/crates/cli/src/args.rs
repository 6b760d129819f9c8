use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use zeqr::{Mode, PostmodifierRule};

#[derive(Debug, Parser)]
#[command(name = "zeqr", version, about = "Zero-shot conversational query reformulation")]
pub struct Cli {
    /// Key-value TOML file with defaults for any option below.
    #[arg(long, global = true, env = "ZEQR_CONFIG")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

/// Pipeline parameters. Each also reads `ZEQR_<NAME>` from the environment.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true, env = "ZEQR_IDF_THRESHOLD")]
    pub idf_threshold: Option<f64>,
    #[arg(long, global = true, env = "ZEQR_PREMODIFIER_IDF_THRESHOLD")]
    pub premodifier_idf_threshold: Option<f64>,
    #[arg(long, global = true, env = "ZEQR_BM25_K1")]
    pub bm25_k1: Option<f64>,
    #[arg(long, global = true, env = "ZEQR_BM25_B")]
    pub bm25_b: Option<f64>,
    #[arg(long, global = true, env = "ZEQR_READER_MAX_TOKENS")]
    pub reader_max_tokens: Option<usize>,
    #[arg(long, global = true, env = "ZEQR_MIN_ANSWER_SCORE")]
    pub min_answer_score: Option<f64>,
    /// full, coref_only, omission_only or passthrough.
    #[arg(long, global = true, env = "ZEQR_MODE")]
    pub mode: Option<Mode>,
    /// Minimum grade counted as relevant by P@5, R@100 and MAP.
    #[arg(long, global = true, env = "ZEQR_MAP_RELEVANCE_CUTOFF")]
    pub relevance_cutoff: Option<u32>,
    /// strict: any preposition after a word blocks it; lenient: only of/to.
    #[arg(long, global = true, env = "ZEQR_POSTMODIFIER_RULE")]
    pub postmodifier: Option<PostmodifierRule>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the BM25 index and IDF table for a collection.
    Index(IndexArgs),
    /// Reformulate every topic turn, retrieve, and write a TREC run.
    Run(RunArgs),
    /// Score one run, or compare two with paired t-tests.
    Eval(EvalArgs),
    /// Pretty-print a trace file written by `run`.
    Trace(TraceArgs),
    /// Count turns with coreference or omission ambiguity.
    Census(CensusArgs),
    /// Interactive session over an index.
    Repl(ReplArgs),
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// JSONL collection, one {"id", "contents"} object per line.
    #[arg(long, env = "ZEQR_COLLECTION")]
    pub collection: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "ZEQR_INDEX")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: bool,
    /// Porter-stem index and query terms.
    #[arg(long)]
    pub stem: bool,
}

#[derive(Debug, Args)]
pub struct BackendArgs {
    /// Index directory written by `index`.
    #[arg(long, env = "ZEQR_INDEX")]
    pub index: Option<PathBuf>,
    /// oracle:PATH, remote:URL, generative:URL or echo.
    #[arg(long, env = "ZEQR_READER")]
    pub reader: Option<String>,
    /// Model name sent to a generative backend.
    #[arg(long, env = "ZEQR_MODEL")]
    pub model: Option<String>,
    /// `bm25`, or the base URL of a service answering POST /search.
    #[arg(long, env = "ZEQR_RETRIEVER")]
    pub retriever: Option<String>,
    /// IDF cache; defaults to the one in the index directory.
    #[arg(long, env = "ZEQR_IDF_CACHE")]
    pub idf: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub backend: BackendArgs,
    #[arg(long, env = "ZEQR_TOPICS")]
    pub topics: Option<PathBuf>,
    /// Run file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Trace file; defaults to `<out>.trace.jsonl`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub depth: usize,
    /// Run tag; defaults to `zeqr_<mode>`.
    #[arg(long)]
    pub tag: Option<String>,
    /// Sessions processed concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// One run file, or two to compare.
    #[arg(long = "run", required = true, num_args = 1)]
    pub runs: Vec<PathBuf>,
    #[arg(long, env = "ZEQR_QRELS")]
    pub qrels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    pub file: PathBuf,
    /// Show only this query id.
    #[arg(long)]
    pub query: Option<String>,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long, env = "ZEQR_TOPICS")]
    pub topics: Option<PathBuf>,
    /// Index directory whose IDF table to use.
    #[arg(long, env = "ZEQR_INDEX")]
    pub index: Option<PathBuf>,
    #[arg(long, env = "ZEQR_IDF_CACHE")]
    pub idf: Option<PathBuf>,
    /// Also list the flags of every turn.
    #[arg(long)]
    pub per_turn: bool,
}

#[derive(Debug, Args)]
pub struct ReplArgs {
    #[command(flatten)]
    pub backend: BackendArgs,
    /// Results shown per turn.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
}
