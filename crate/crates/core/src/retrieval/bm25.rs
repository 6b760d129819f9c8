//! Okapi BM25 with Robertson-Lucene IDF:
//!
//! ```text
//! score(d) = Σ_t idf(t) · tf(t,d)·(k1+1) / (tf(t,d) + k1·(1 − b + b·|d|/avgdl))
//! idf(t)   = ln(1 + (N − df + 0.5) / (df + 0.5))
//! ```

use crate::datamodel::Config;
use crate::error::{Error, Result};

use super::index::InvertedIndex;
use super::run::ScoredDoc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 0.9, b: 0.4 }
    }
}

impl From<&Config> for Bm25Params {
    fn from(c: &Config) -> Self {
        Bm25Params { k1: c.bm25_k1, b: c.bm25_b }
    }
}

pub fn robertson_idf(num_docs: usize, df: usize) -> f64 {
    let (n, df) = (num_docs as f64, df as f64);
    (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
}

/// Top `k` documents for `query`, score descending, ties by doc id.
/// Query terms repeat-count, as in a bag-of-words sum.
pub fn bm25_search(index: &InvertedIndex, query: &str, k: usize, params: Bm25Params) -> Result<Vec<ScoredDoc>> {
    if k < 1 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let n = index.num_docs();
    let mut scores = vec![0.0f64; n];
    let mut matched = vec![false; n];
    for term in index.analyzer.terms(query) {
        let Some(postings) = index.postings.get(&term) else {
            continue;
        };
        let idf = robertson_idf(n, postings.len());
        for &(doc, tf) in postings {
            let doc = doc as usize;
            let tf = tf as f64;
            let norm = params.k1 * (1.0 - params.b + params.b * index.doc_lengths[doc] as f64 / index.avg_doc_length);
            scores[doc] += idf * tf * (params.k1 + 1.0) / (tf + norm);
            matched[doc] = true;
        }
    }
    let mut ranked: Vec<(usize, f64)> = (0..n).filter(|&d| matched[d]).map(|d| (d, scores[d])).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| index.doc_ids[a.0].cmp(&index.doc_ids[b.0])));
    ranked.truncate(k);
    Ok(ranked
        .into_iter()
        .map(|(d, score)| ScoredDoc {
            doc_id: index.doc_ids[d].clone(),
            score,
        })
        .collect())
}
