//! Loading topics, qrels, and document collections; building IDF tables.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datamodel::{Session, Turn};
use crate::error::{Error, Result};
use crate::linguistics::tokenize::normalize_terms;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    #[serde(rename = "id")]
    pub doc_id: String,
    #[serde(rename = "contents")]
    pub body: String,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, body: impl Into<String>) -> Self {
        Document {
            doc_id: doc_id.into(),
            body: body.into(),
        }
    }
}

/// Reads a JSON-lines collection of `{"id": ..., "contents": ...}` objects.
pub fn load_collection(path: &Path) -> Result<Vec<Document>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_collection(&text, &path.display().to_string())
}

pub fn parse_collection(text: &str, source: &str) -> Result<Vec<Document>> {
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let location = || format!("{source}:{}", lineno + 1);
        let doc: Document = serde_json::from_str(line).map_err(|e| Error::parse(location(), e.to_string()))?;
        if doc.body.trim().is_empty() {
            return Err(Error::parse(location(), format!("document `{}` has an empty body", doc.doc_id)));
        }
        if !seen.insert(doc.doc_id.clone()) {
            return Err(Error::DuplicateDocument(doc.doc_id));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_collection(docs: &[Document], path: &Path) -> Result<()> {
    let mut out = String::new();
    for doc in docs {
        out.push_str(&serde_json::to_string(doc).expect("document serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
enum TopicNumber {
    Int(u64),
    Text(String),
}

impl TopicNumber {
    fn as_string(&self) -> String {
        match self {
            TopicNumber::Int(n) => n.to_string(),
            TopicNumber::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct TopicRecord {
    number: TopicNumber,
    turn: Vec<TurnRecord>,
}

#[derive(Debug, Deserialize, Serialize)]
struct TurnRecord {
    number: usize,
    raw_utterance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical_result_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical_passage: Option<String>,
}

/// Loads conversational topics. Canonical passages given only by id are
/// looked up in `collection`; an id missing from it is a parse error.
pub fn load_topics(path: &Path, collection: Option<&[Document]>) -> Result<Vec<Session>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_topics(&text, &path.display().to_string(), collection)
}

pub fn parse_topics(text: &str, source: &str, collection: Option<&[Document]>) -> Result<Vec<Session>> {
    parse_topic_records(text, source, collection, true)
}

/// Loads topics for query-only work such as the ambiguity census:
/// canonical passages given by id are left unresolved.
pub fn load_topic_queries(path: &Path) -> Result<Vec<Session>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_topic_records(&text, &path.display().to_string(), None, false)
}

fn parse_topic_records(
    text: &str,
    source: &str,
    collection: Option<&[Document]>,
    resolve_ids: bool,
) -> Result<Vec<Session>> {
    let records: Vec<TopicRecord> =
        serde_json::from_str(text).map_err(|e| Error::parse(source, e.to_string()))?;
    let bodies: Option<HashMap<&str, &str>> =
        collection.map(|docs| docs.iter().map(|d| (d.doc_id.as_str(), d.body.as_str())).collect());

    let mut sessions = Vec::with_capacity(records.len());
    for record in records {
        let session_id = record.number.as_string();
        let mut turns = Vec::with_capacity(record.turn.len());
        for t in record.turn {
            let location = format!("{source}: topic {session_id} turn {}", t.number);
            if t.raw_utterance.trim().is_empty() {
                return Err(Error::parse(location, "empty raw_utterance"));
            }
            let answer = match (&t.canonical_passage, &t.canonical_result_id) {
                (Some(passage), _) => Some(passage.clone()),
                (None, Some(_)) if !resolve_ids => None,
                (None, Some(id)) => {
                    let bodies = bodies.as_ref().ok_or_else(|| {
                        Error::parse(&location, format!("canonical_result_id `{id}` given but no collection was supplied"))
                    })?;
                    let body = bodies
                        .get(id.as_str())
                        .ok_or_else(|| Error::parse(&location, format!("canonical_result_id `{id}` not found in collection")))?;
                    Some(body.to_string())
                }
                (None, None) => None,
            };
            turns.push(Turn {
                turn_id: t.number,
                raw_query: t.raw_utterance,
                canonical_answer: answer,
                canonical_answer_id: t.canonical_result_id,
            });
        }
        let session = Session::new(session_id.clone(), turns)
            .map_err(|e| Error::parse(format!("{source}: topic {session_id}"), e.to_string()))?;
        sessions.push(session);
    }
    Ok(sessions)
}

/// Serializes sessions in the topic schema, passages inline.
pub fn topics_to_json(sessions: &[Session]) -> String {
    let records: Vec<TopicRecord> = sessions
        .iter()
        .map(|s| TopicRecord {
            number: s
                .session_id
                .parse::<u64>()
                .ok()
                .filter(|n| n.to_string() == s.session_id)
                .map_or_else(|| TopicNumber::Text(s.session_id.clone()), TopicNumber::Int),
            turn: s
                .turns
                .iter()
                .map(|t| TurnRecord {
                    number: t.turn_id,
                    raw_utterance: t.raw_query.clone(),
                    canonical_result_id: t.canonical_answer_id.clone(),
                    canonical_passage: t.canonical_answer.clone(),
                })
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("topics serialize")
}

/// Graded relevance judgments. Absent pairs are unjudged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    judgments: BTreeMap<String, BTreeMap<String, u32>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, query_id: impl Into<String>, doc_id: impl Into<String>, grade: u32) {
        self.judgments.entry(query_id.into()).or_default().insert(doc_id.into(), grade);
    }

    pub fn grade(&self, query_id: &str, doc_id: &str) -> Option<u32> {
        self.judgments.get(query_id)?.get(doc_id).copied()
    }

    pub fn contains_query(&self, query_id: &str) -> bool {
        self.judgments.contains_key(query_id)
    }

    /// All judgments for a query, by doc id.
    pub fn for_query(&self, query_id: &str) -> Option<&BTreeMap<String, u32>> {
        self.judgments.get(query_id)
    }

    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.judgments.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reads TREC qrels: `query_id 0 doc_id grade` per line. Later duplicates win.
pub fn load_qrels(path: &Path) -> Result<Qrels> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_qrels(&text, &path.display().to_string())
}

pub fn parse_qrels(text: &str, source: &str) -> Result<Qrels> {
    let mut qrels = Qrels::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let location = || format!("{source}:{}", lineno + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [query_id, _iteration, doc_id, grade] = fields[..] else {
            return Err(Error::parse(location(), format!("expected 4 columns, found {}", fields.len())));
        };
        let grade: u32 = grade
            .parse()
            .map_err(|_| Error::parse(location(), format!("grade `{grade}` is not a non-negative integer")))?;
        qrels.insert(query_id, doc_id, grade);
    }
    Ok(qrels)
}

/// `ln(N / df)` per term over a collection; unseen terms get `ln(N / 0.5)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    term_idf: BTreeMap<String, f64>,
    num_docs: usize,
    default_idf: f64,
}

impl IdfTable {
    /// Builds a table from precomputed document frequencies; `df` of zero
    /// entries are dropped.
    pub fn from_document_frequencies<I>(num_docs: usize, dfs: I) -> Self
    where
        I: IntoIterator<Item = (String, usize)>,
    {
        let n = num_docs as f64;
        let term_idf = dfs
            .into_iter()
            .filter(|&(_, df)| df > 0)
            .map(|(term, df)| (term, (n / df as f64).ln()))
            .collect();
        IdfTable {
            term_idf,
            num_docs,
            default_idf: (n / 0.5).ln(),
        }
    }

    pub fn idf(&self, term: &str) -> f64 {
        self.term_idf.get(term).copied().unwrap_or(self.default_idf)
    }

    pub fn get(&self, term: &str) -> Option<f64> {
        self.term_idf.get(term).copied()
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn default_idf(&self) -> f64 {
        self.default_idf
    }

    pub fn len(&self) -> usize {
        self.term_idf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.term_idf.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.term_idf.iter().map(|(t, &v)| (t.as_str(), v))
    }

    /// `#docs=N` header, then `term<TAB>idf` lines sorted by term.
    pub fn to_cache_string(&self) -> String {
        let mut out = format!("#docs={}\n", self.num_docs);
        for (term, idf) in &self.term_idf {
            writeln!(out, "{term}\t{idf}").unwrap();
        }
        out
    }

    pub fn from_cache_str(text: &str, source: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let num_docs = lines
            .next()
            .and_then(|(_, l)| l.strip_prefix("#docs="))
            .and_then(|n| n.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::parse(format!("{source}:1"), "missing or invalid `#docs=N` header"))?;
        let mut term_idf = BTreeMap::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let location = || format!("{source}:{}", i + 1);
            let (term, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(location(), "expected `term<TAB>idf`"))?;
            let value: f64 = value.parse().map_err(|_| Error::parse(location(), format!("bad idf `{value}`")))?;
            if value.is_nan() || value < 0.0 {
                return Err(Error::parse(location(), format!("negative idf {value}")));
            }
            term_idf.insert(term.to_string(), value);
        }
        Ok(IdfTable {
            term_idf,
            num_docs,
            default_idf: (num_docs as f64 / 0.5).ln(),
        })
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_cache_string()).map_err(|e| Error::io(path, e))
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_cache_str(&text, &path.display().to_string())
    }
}

pub fn build_idf_table(collection: &[Document]) -> Result<IdfTable> {
    if collection.is_empty() {
        return Err(Error::Precondition("cannot build an IDF table from an empty collection".into()));
    }
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in collection {
        let unique: HashSet<String> = normalize_terms(&doc.body).into_iter().collect();
        for term in unique {
            *df.entry(term).or_default() += 1;
        }
    }
    Ok(IdfTable::from_document_frequencies(collection.len(), df))
}
