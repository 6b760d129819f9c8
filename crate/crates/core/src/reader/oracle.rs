use std::collections::BTreeMap;
use std::path::Path;

use super::{Reader, ReaderError, ReaderInput, SpanAnswer};
use crate::error::{Error, Result};

/// Fixture-backed reader: maps questions to answer strings.
///
/// A question matches an entry whose key equals it exactly; failing that,
/// the longest key that is a prefix of the question wins, so a key like
/// `treatments of what` covers every query the template is applied to.
/// Answers must occur verbatim in the context.
#[derive(Debug, Clone, Default)]
pub struct OracleReader {
    entries: BTreeMap<String, String>,
}

impl OracleReader {
    pub fn new<I, K, V>(entries: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        OracleReader {
            entries: entries.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    /// Loads a JSON object `{"question or prefix": "answer", ...}`.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn from_json_str(text: &str, source: &str) -> Result<Self> {
        let entries: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| Error::parse(source, e.to_string()))?;
        Ok(OracleReader { entries })
    }

    pub fn lookup(&self, question: &str) -> Option<&str> {
        if let Some(a) = self.entries.get(question) {
            return Some(a);
        }
        self.entries
            .iter()
            .filter(|(k, _)| question.starts_with(k.as_str()))
            .max_by_key(|(k, _)| k.len())
            .map(|(_, v)| v.as_str())
    }
}

impl Reader for OracleReader {
    fn name(&self) -> &str {
        "oracle"
    }

    fn answer(&self, input: &ReaderInput) -> Result<SpanAnswer, ReaderError> {
        let answer = self
            .lookup(&input.question)
            .ok_or_else(|| ReaderError::NoAnswer(input.question.clone()))?;
        SpanAnswer::locate(&input.context, answer, 1.0).ok_or_else(|| ReaderError::NonExtractive {
            answer: answer.to_string(),
        })
    }
}
