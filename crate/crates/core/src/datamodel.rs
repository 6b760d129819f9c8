//! Sessions, turns, the per-turn dialogue context, and run configuration.
//!
//! A [`DialogueContext`] for turn `t` holds every prior raw query plus the
//! most recent canonical passage, shortened from the end when the reader's
//! input budget would otherwise be exceeded.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linguistics::tokenize::{count_tokens, truncate_to_tokens};

/// Tokens held back from the reader budget for the question and separator.
/// 512 − 384 mirrors the reader's training-time context length.
pub const QUESTION_RESERVE_TOKENS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    /// 1-based position within the session.
    pub turn_id: usize,
    pub raw_query: String,
    pub canonical_answer: Option<String>,
    pub canonical_answer_id: Option<String>,
}

impl Turn {
    pub fn new(turn_id: usize, raw_query: impl Into<String>) -> Self {
        Turn {
            turn_id,
            raw_query: raw_query.into(),
            canonical_answer: None,
            canonical_answer_id: None,
        }
    }

    pub fn with_answer(mut self, answer: impl Into<String>) -> Self {
        self.canonical_answer = Some(answer.into());
        self
    }

    pub fn with_answer_id(mut self, id: impl Into<String>) -> Self {
        self.canonical_answer_id = Some(id.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub turns: Vec<Turn>,
}

impl Session {
    /// Builds a session, checking that turns are non-empty, numbered
    /// `1..=N` in order, and carry non-blank queries.
    pub fn new(session_id: impl Into<String>, turns: Vec<Turn>) -> Result<Self> {
        let session_id = session_id.into();
        if turns.is_empty() {
            return Err(Error::Precondition(format!(
                "session `{session_id}` has no turns"
            )));
        }
        for (i, turn) in turns.iter().enumerate() {
            if turn.turn_id != i + 1 {
                return Err(Error::Precondition(format!(
                    "session `{session_id}`: expected turn {} but found turn {}",
                    i + 1,
                    turn.turn_id
                )));
            }
            if turn.raw_query.trim().is_empty() {
                return Err(Error::Precondition(format!(
                    "session `{session_id}` turn {}: empty query",
                    turn.turn_id
                )));
            }
        }
        Ok(Session { session_id, turns })
    }

    pub fn turn(&self, turn_id: usize) -> Option<&Turn> {
        turn_id.checked_sub(1).and_then(|i| self.turns.get(i))
    }

    /// Query id used in run and qrels files: `{session}_{turn}`.
    pub fn query_id(&self, turn_id: usize) -> String {
        format!("{}_{}", self.session_id, turn_id)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogueContext {
    pub prior_queries: Vec<String>,
    pub latest_answer: Option<String>,
    pub truncated: bool,
}

impl DialogueContext {
    pub fn is_empty(&self) -> bool {
        self.prior_queries.is_empty() && self.latest_answer.as_deref().is_none_or(str::is_empty)
    }

    /// Prior queries joined by single spaces, followed by the latest answer.
    pub fn serialize(&self) -> String {
        let mut parts: Vec<&str> = self.prior_queries.iter().map(String::as_str).collect();
        if let Some(answer) = self.latest_answer.as_deref() {
            if !answer.is_empty() {
                parts.push(answer);
            }
        }
        parts.join(" ")
    }
}

/// Which resolution steps run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Full,
    CorefOnly,
    OmissionOnly,
    Passthrough,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Full, Mode::CorefOnly, Mode::OmissionOnly, Mode::Passthrough];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::CorefOnly => "coref_only",
            Mode::OmissionOnly => "omission_only",
            Mode::Passthrough => "passthrough",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown mode `{s}`")))
    }
}

/// How a following preposition blocks omission resolution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostmodifierRule {
    /// Any preposition right after the word blocks it.
    #[default]
    Strict,
    /// Only the template preposition itself (`of` for nouns, `to` for verbs) blocks it.
    Lenient,
}

impl FromStr for PostmodifierRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(PostmodifierRule::Strict),
            "lenient" => Ok(PostmodifierRule::Lenient),
            other => Err(Error::Config(format!("unknown postmodifier rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// IDF gate for omission candidates.
    pub idf_threshold: f64,
    /// An adjective or noun premodifier counts as disambiguating only above this IDF.
    pub premodifier_idf_threshold: f64,
    pub bm25_k1: f64,
    pub bm25_b: f64,
    pub reader_max_tokens: usize,
    pub min_answer_score: f64,
    pub mode: Mode,
    /// Minimum grade counted as relevant by P@5, R@100 and MAP.
    pub map_relevance_cutoff: u32,
    pub postmodifier_rule: PostmodifierRule,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            idf_threshold: 2.65,
            premodifier_idf_threshold: 2.65,
            bm25_k1: 0.9,
            bm25_b: 0.4,
            reader_max_tokens: 512,
            min_answer_score: 0.0,
            mode: Mode::Full,
            map_relevance_cutoff: 1,
            postmodifier_rule: PostmodifierRule::Strict,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.idf_threshold.is_nan() || self.idf_threshold < 0.0 {
            return Err(Error::Config(format!(
                "idf_threshold must be >= 0, got {}",
                self.idf_threshold
            )));
        }
        if self.premodifier_idf_threshold.is_nan() || self.premodifier_idf_threshold < 0.0 {
            return Err(Error::Config(format!(
                "premodifier_idf_threshold must be >= 0, got {}",
                self.premodifier_idf_threshold
            )));
        }
        if self.bm25_k1.is_nan() || self.bm25_k1 <= 0.0 {
            return Err(Error::Config(format!("bm25_k1 must be > 0, got {}", self.bm25_k1)));
        }
        if !(0.0..=1.0).contains(&self.bm25_b) {
            return Err(Error::Config(format!("bm25_b must lie in [0, 1], got {}", self.bm25_b)));
        }
        if self.reader_max_tokens == 0 {
            return Err(Error::Config("reader_max_tokens must be > 0".into()));
        }
        if self.map_relevance_cutoff == 0 {
            return Err(Error::Config("map_relevance_cutoff must be > 0".into()));
        }
        Ok(())
    }

    /// Token budget left for the serialized context once the question
    /// reserve and the separator are accounted for.
    pub fn context_token_budget(&self) -> usize {
        self.reader_max_tokens
            .saturating_sub(QUESTION_RESERVE_TOKENS + 1)
    }
}

/// Assembles the context for `turn_id`: all earlier raw queries and the
/// canonical passage of the latest earlier turn that has one.
pub fn context_for_turn(session: &Session, turn_id: usize, config: &Config) -> Result<DialogueContext> {
    let num_turns = session.turns.len();
    if turn_id == 0 || turn_id > num_turns {
        return Err(Error::TurnOutOfRange { turn_id, num_turns });
    }
    let prior = &session.turns[..turn_id - 1];
    let prior_queries: Vec<String> = prior.iter().map(|t| t.raw_query.clone()).collect();
    let answer = prior.iter().rev().find_map(|t| t.canonical_answer.as_deref());

    let Some(answer) = answer else {
        return Ok(DialogueContext {
            prior_queries,
            latest_answer: None,
            truncated: false,
        });
    };

    let query_tokens: usize = prior_queries.iter().map(|q| count_tokens(q)).sum();
    let answer_budget = config.context_token_budget().saturating_sub(query_tokens);
    let (latest_answer, truncated) = truncate_to_tokens(answer, answer_budget);
    Ok(DialogueContext {
        prior_queries,
        latest_answer: Some(latest_answer.to_string()),
        truncated,
    })
}
