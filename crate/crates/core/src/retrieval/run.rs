//! Ranked results and the six-column TREC run format:
//! `query_id Q0 doc_id rank score tag`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDoc {
    pub doc_id: String,
    pub score: f64,
}

impl ScoredDoc {
    pub fn new(doc_id: impl Into<String>, score: f64) -> Self {
        ScoredDoc { doc_id: doc_id.into(), score }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub query_id: String,
    pub ranked: Vec<ScoredDoc>,
    pub tag: String,
}

impl RunResult {
    pub fn new(query_id: impl Into<String>, ranked: Vec<ScoredDoc>, tag: impl Into<String>) -> Self {
        RunResult {
            query_id: query_id.into(),
            ranked,
            tag: tag.into(),
        }
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.ranked.iter().map(|d| d.doc_id.as_str())
    }
}

/// Checks that a ranking is finite, non-increasing in score, free of
/// duplicate ids, and no deeper than `depth`.
pub fn validate_ranking(ranked: &[ScoredDoc], depth: Option<usize>) -> std::result::Result<(), String> {
    if let Some(depth) = depth {
        if ranked.len() > depth {
            return Err(format!("{} results exceed requested depth {depth}", ranked.len()));
        }
    }
    let mut seen = HashSet::with_capacity(ranked.len());
    for (i, d) in ranked.iter().enumerate() {
        if !d.score.is_finite() {
            return Err(format!("non-finite score at rank {}", i + 1));
        }
        if !seen.insert(d.doc_id.as_str()) {
            return Err(format!("duplicate doc id `{}`", d.doc_id));
        }
        if i > 0 && d.score > ranked[i - 1].score {
            return Err(format!(
                "score increases from {} to {} at rank {}",
                ranked[i - 1].score,
                d.score,
                i + 1
            ));
        }
    }
    Ok(())
}

pub fn format_run(results: &[RunResult]) -> String {
    let mut out = String::new();
    for r in results {
        for (i, d) in r.ranked.iter().enumerate() {
            writeln!(out, "{} Q0 {} {} {} {}", r.query_id, d.doc_id, i + 1, d.score, r.tag).unwrap();
        }
    }
    out
}

pub fn write_run(results: &[RunResult], path: &Path) -> Result<()> {
    fs::write(path, format_run(results)).map_err(|e| Error::io(path, e))
}

/// Parses a run file. Queries keep first-appearance order; documents are
/// ordered by the rank column.
pub fn parse_run(text: &str, source: &str) -> Result<Vec<RunResult>> {
    let mut results: Vec<RunResult> = Vec::new();
    let mut ranks: Vec<Vec<usize>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let location = || format!("{source}:{}", lineno + 1);
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [query_id, _q0, doc_id, rank, score, tag] = fields[..] else {
            return Err(Error::parse(location(), format!("expected 6 columns, found {}", fields.len())));
        };
        let rank: usize = rank.parse().map_err(|_| Error::parse(location(), format!("bad rank `{rank}`")))?;
        let score: f64 = score.parse().map_err(|_| Error::parse(location(), format!("bad score `{score}`")))?;
        let slot = match results.iter().position(|r| r.query_id == query_id) {
            Some(i) => i,
            None => {
                results.push(RunResult::new(query_id, Vec::new(), tag));
                ranks.push(Vec::new());
                results.len() - 1
            }
        };
        results[slot].ranked.push(ScoredDoc {
            doc_id: doc_id.to_string(),
            score,
        });
        ranks[slot].push(rank);
    }
    for (result, rank) in results.iter_mut().zip(ranks) {
        let mut paired: Vec<(usize, ScoredDoc)> = rank.into_iter().zip(result.ranked.drain(..)).collect();
        paired.sort_by_key(|(r, _)| *r);
        result.ranked = paired.into_iter().map(|(_, d)| d).collect();
    }
    Ok(results)
}

pub fn load_run(path: &Path) -> Result<Vec<RunResult>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run(&text, &path.display().to_string())
}
