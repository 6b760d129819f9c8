//! Machine-reading-comprehension seam.
//!
//! A reader receives a question and a context and returns a span copied
//! out of the context. Backends differ only in how they pick the span;
//! [`extract_span`] checks every answer against the same contract so the
//! rest of the pipeline never depends on which backend is active.

mod generative;
mod oracle;
mod remote;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datamodel::{Config, DialogueContext};
use crate::linguistics::tokenize::{char_slice, count_tokens, truncate_to_tokens};

pub use generative::{ChatCompletionsGenerator, GenerativeReader, Generator, EXTRACTIVE_INSTRUCTION};
pub use oracle::OracleReader;
pub use remote::{RemoteReader, RetryPolicy};

/// Text-level separator between question and context.
pub const SEP: &str = "<SEP>";
const SEP_ESCAPED: &str = "[SEP]";

#[derive(Debug, Error)]
pub enum ReaderError {
    #[error("reader called with an empty context")]
    NoContext,

    #[error("reader has no answer for question: {0}")]
    NoAnswer(String),

    #[error("answer `{answer}` is not a substring of the context")]
    NonExtractive { answer: String },

    #[error("reader endpoint {endpoint} unreachable after {attempts} attempt(s): {message}")]
    Transport {
        endpoint: String,
        attempts: u32,
        message: String,
    },

    #[error("reader protocol error: {0}")]
    Protocol(String),

    #[error("reader precondition violated: {0}")]
    Precondition(String),
}

impl ReaderError {
    /// Errors that mean "the reader could not resolve this", as opposed to
    /// the reader being broken.
    pub fn is_unanswerable(&self) -> bool {
        matches!(
            self,
            ReaderError::NoContext | ReaderError::NoAnswer(_) | ReaderError::NonExtractive { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReaderInput {
    pub question: String,
    pub context: String,
    pub formatted: String,
}

impl ReaderInput {
    /// Length in tokens, counting the separator as one.
    pub fn token_len(&self) -> usize {
        count_tokens(&self.question) + 1 + count_tokens(&self.context)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanAnswer {
    pub text: String,
    /// Char offsets into the reader input's context.
    pub char_start: usize,
    pub char_end: usize,
    pub score: f64,
}

impl SpanAnswer {
    /// Locates the first occurrence of `answer` in `context`.
    pub fn locate(context: &str, answer: &str, score: f64) -> Option<SpanAnswer> {
        if answer.is_empty() {
            return None;
        }
        let byte = context.find(answer)?;
        let char_start = context[..byte].chars().count();
        Some(SpanAnswer {
            text: answer.to_string(),
            char_start,
            char_end: char_start + answer.chars().count(),
            score,
        })
    }
}

pub trait Reader: Send + Sync {
    fn name(&self) -> &str;

    /// Backend-specific span selection. Callers should go through
    /// [`extract_span`], which validates the result.
    fn answer(&self, input: &ReaderInput) -> Result<SpanAnswer, ReaderError>;
}

/// Joins question and serialized context around [`SEP`], cutting the
/// context tail so the whole input fits `config.reader_max_tokens`.
pub fn build_reader_input(question: &str, context: &DialogueContext, config: &Config) -> Result<ReaderInput, ReaderError> {
    if question.trim().is_empty() {
        return Err(ReaderError::Precondition("question must be non-empty".into()));
    }
    let question = question.replace(SEP, SEP_ESCAPED);
    let serialized = context.serialize().replace(SEP, SEP_ESCAPED);
    let budget = config.reader_max_tokens.saturating_sub(count_tokens(&question) + 1);
    let (context, _) = truncate_to_tokens(&serialized, budget);
    let context = context.to_string();
    let formatted = format!("{question} {SEP} {context}");
    Ok(ReaderInput {
        question,
        context,
        formatted,
    })
}

/// Runs `reader` and enforces the span contract: non-empty context in,
/// a span whose offsets reproduce its text out.
pub fn extract_span(reader: &dyn Reader, input: &ReaderInput) -> Result<SpanAnswer, ReaderError> {
    if input.context.trim().is_empty() {
        return Err(ReaderError::NoContext);
    }
    let answer = reader.answer(input)?;
    if answer.text.is_empty() || answer.char_start >= answer.char_end {
        return Err(ReaderError::Protocol(format!(
            "{} returned an empty span ({}..{})",
            reader.name(),
            answer.char_start,
            answer.char_end
        )));
    }
    if char_slice(&input.context, answer.char_start, answer.char_end) != Some(answer.text.as_str()) {
        return Err(ReaderError::Protocol(format!(
            "{} returned offsets {}..{} that do not reproduce `{}`",
            reader.name(),
            answer.char_start,
            answer.char_end,
            answer.text
        )));
    }
    if !answer.score.is_finite() {
        return Err(ReaderError::Protocol(format!("{} returned a non-finite score", reader.name())));
    }
    Ok(answer)
}

/// Returns the whole context as the answer. Useful for plumbing tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct EchoReader;

impl Reader for EchoReader {
    fn name(&self) -> &str {
        "echo"
    }

    fn answer(&self, input: &ReaderInput) -> Result<SpanAnswer, ReaderError> {
        Ok(SpanAnswer {
            text: input.context.clone(),
            char_start: 0,
            char_end: input.context.chars().count(),
            score: 1.0,
        })
    }
}
