//! BM25 indexing and search, the external retriever seam, and TREC runs.

mod bm25;
mod external;
mod index;
mod run;

use std::sync::Arc;

pub use bm25::{bm25_search, robertson_idf, Bm25Params};
pub use external::{external_search, ExternalRetriever, SearchRequest, SearchResponse};
pub use index::{build_index, Analyzer, InvertedIndex, INDEX_FORMAT, INDEX_VERSION};
pub use run::{format_run, load_run, parse_run, validate_ranking, write_run, RunResult, ScoredDoc};

use crate::error::Result;

pub trait Retriever: Send + Sync {
    fn search(&self, query: &str, k: usize) -> Result<Vec<ScoredDoc>>;
}

pub struct Bm25Retriever {
    index: Arc<InvertedIndex>,
    params: Bm25Params,
}

impl Bm25Retriever {
    pub fn new(index: Arc<InvertedIndex>, params: Bm25Params) -> Self {
        Bm25Retriever { index, params }
    }

    pub fn index(&self) -> &InvertedIndex {
        &self.index
    }
}

impl Retriever for Bm25Retriever {
    fn search(&self, query: &str, k: usize) -> Result<Vec<ScoredDoc>> {
        bm25_search(&self.index, query, k, self.params)
    }
}
