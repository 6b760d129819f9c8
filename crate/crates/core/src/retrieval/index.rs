use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Document;
use crate::linguistics::tokenize::normalize_terms;

pub const INDEX_FORMAT: &str = "zeqr-index";
pub const INDEX_VERSION: u32 = 1;

const STOPWORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "if", "in", "into", "is", "it",
    "no", "not", "of", "on", "or", "such", "that", "the", "their", "then", "there", "these",
    "they", "this", "to", "was", "will", "with",
];

fn stemmer() -> &'static Stemmer {
    static STEMMER: OnceLock<Stemmer> = OnceLock::new();
    STEMMER.get_or_init(|| Stemmer::create(Algorithm::English))
}

/// Term pipeline for indexing and querying. Both default to off: plain
/// lowercased word tokens, the same terms the IDF table uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analyzer {
    pub remove_stopwords: bool,
    pub stem: bool,
}

impl Analyzer {
    pub fn terms(&self, text: &str) -> Vec<String> {
        normalize_terms(text)
            .into_iter()
            .filter(|t| !self.remove_stopwords || !STOPWORDS.contains(&t.as_str()))
            .map(|t| if self.stem { stemmer().stem(&t).into_owned() } else { t })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertedIndex {
    format: String,
    version: u32,
    pub analyzer: Analyzer,
    pub doc_ids: Vec<String>,
    pub doc_lengths: Vec<u32>,
    pub avg_doc_length: f64,
    /// term → (doc_index, term frequency), sorted by doc_index.
    pub postings: BTreeMap<String, Vec<(u32, u32)>>,
}

impl InvertedIndex {
    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn num_terms(&self) -> usize {
        self.postings.len()
    }

    pub fn document_frequency(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self).expect("index serializes");
        fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let index: InvertedIndex =
            serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        if index.format != INDEX_FORMAT || index.version != INDEX_VERSION {
            return Err(Error::parse(
                path.display().to_string(),
                format!(
                    "unsupported index format {} v{} (expected {INDEX_FORMAT} v{INDEX_VERSION})",
                    index.format, index.version
                ),
            ));
        }
        Ok(index)
    }
}

pub fn build_index(collection: &[Document], analyzer: Analyzer) -> Result<InvertedIndex> {
    if collection.is_empty() {
        return Err(Error::Precondition("cannot index an empty collection".into()));
    }
    let mut seen = HashSet::with_capacity(collection.len());
    let mut postings: BTreeMap<String, Vec<(u32, u32)>> = BTreeMap::new();
    let mut doc_lengths = Vec::with_capacity(collection.len());
    let mut doc_ids = Vec::with_capacity(collection.len());

    for (i, doc) in collection.iter().enumerate() {
        if !seen.insert(doc.doc_id.as_str()) {
            return Err(Error::DuplicateDocument(doc.doc_id.clone()));
        }
        let terms = analyzer.terms(&doc.body);
        doc_lengths.push(terms.len() as u32);
        doc_ids.push(doc.doc_id.clone());
        let mut tf: HashMap<String, u32> = HashMap::new();
        for t in terms {
            *tf.entry(t).or_default() += 1;
        }
        for (term, count) in tf {
            postings.entry(term).or_default().push((i as u32, count));
        }
    }

    let total: u64 = doc_lengths.iter().map(|&l| l as u64).sum();
    Ok(InvertedIndex {
        format: INDEX_FORMAT.to_string(),
        version: INDEX_VERSION,
        analyzer,
        avg_doc_length: total as f64 / doc_ids.len() as f64,
        doc_ids,
        doc_lengths,
        postings,
    })
}
