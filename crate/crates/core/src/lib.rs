//! Zero-shot conversational query reformulation.
//!
//! Each turn of a conversational search session is rewritten into a
//! self-contained query in two steps: pronouns are replaced by their
//! referents, then important words whose description was left implicit get
//! it appended. Both steps pose template questions to a pluggable
//! extractive reader over the dialogue context. The crate also carries the
//! surrounding harness: topic and qrels loading, IDF statistics, a BM25
//! engine with an external-retriever seam, and TREC-style evaluation.

pub mod datamodel;
pub mod error;
pub mod evaluation;
mod http;
pub mod ingest;
pub mod linguistics;
pub mod pipeline;
pub mod reader;
pub mod reformulator;
pub mod retrieval;

pub use datamodel::{context_for_turn, Config, DialogueContext, Mode, PostmodifierRule, Session, Turn};
pub use error::{Error, Result};
pub use ingest::{build_idf_table, load_collection, load_qrels, load_topic_queries, load_topics, Document, IdfTable, Qrels};
pub use reader::{build_reader_input, extract_span, Reader, ReaderError, ReaderInput, SpanAnswer};
pub use reformulator::{make_coref_question, make_omission_question, ReformulationTrace, Reformulator};
pub use retrieval::{bm25_search, build_index, InvertedIndex, Retriever, RunResult, ScoredDoc};
