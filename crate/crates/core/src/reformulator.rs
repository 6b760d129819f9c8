//! Two-step query reformulation: pronouns are replaced by their referents
//! first, then bare important words get their omitted description appended.
//! Both steps are phrased as questions to a [`Reader`].

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datamodel::{Config, DialogueContext, Mode, Turn};
use crate::error::{Error, Result};
use crate::ingest::IdfTable;
use crate::linguistics::tokenize::byte_offset;
use crate::linguistics::{
    detect_pronouns, find_omission_candidates, OmissionCandidate, OmissionKind, OmissionRules, PosTagger,
    PronounInventory, PronounMention, RuleTagger,
};
use crate::reader::{build_reader_input, extract_span, Reader, ReaderError, SpanAnswer};

pub fn make_coref_question(pronoun: &str, query: &str) -> String {
    format!("What is {pronoun} refer to, in \"{query}\"")
}

pub fn make_omission_question(word: &str, kind: OmissionKind, query: &str) -> String {
    format!("{word} {} what, in \"{query}\"", kind.preposition())
}

/// Why a detected ambiguity was left as is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    EmptyContext,
    NoAnswer,
    NonExtractive,
    LowScore,
    /// The answer is the pronoun or focal word itself.
    EchoesTarget,
    /// The description is already in the query.
    AlreadyPresent,
    ReaderFailed,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::EmptyContext => "empty_context",
            SkipReason::NoAnswer => "no_answer",
            SkipReason::NonExtractive => "non_extractive",
            SkipReason::LowScore => "low_score",
            SkipReason::EchoesTarget => "echoes_target",
            SkipReason::AlreadyPresent => "already_present",
            SkipReason::ReaderFailed => "reader_failed",
        }
    }
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorefStep {
    pub pronoun: PronounMention,
    pub question: String,
    pub answer: Option<SpanAnswer>,
    pub applied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<SkipReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmissionStep {
    pub candidate: OmissionCandidate,
    pub preposition: String,
    pub question: String,
    pub answer: Option<SpanAnswer>,
    pub applied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<SkipReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReformulationTrace {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query_id: Option<String>,
    pub raw_query: String,
    pub mode: Mode,
    pub coref_steps: Vec<CorefStep>,
    pub q_star: String,
    pub omission_steps: Vec<OmissionStep>,
    pub q_double_star: String,
}

impl ReformulationTrace {
    fn passthrough(raw: &str, mode: Mode) -> Self {
        ReformulationTrace {
            query_id: None,
            raw_query: raw.to_string(),
            mode,
            coref_steps: Vec::new(),
            q_star: raw.to_string(),
            omission_steps: Vec::new(),
            q_double_star: raw.to_string(),
        }
    }
}

/// A hard reader failure part-way through one resolution step.
#[derive(Debug)]
pub struct StepFailure<S> {
    pub error: ReaderError,
    /// Query text as it was before the failing step.
    pub text: String,
    /// Steps completed so far, the failing one last.
    pub steps: Vec<S>,
}

/// Reformulation aborted by a reader failure; `trace` holds everything up
/// to the failing step with the query text left at its last good value.
#[derive(Debug, Error)]
#[error("reformulating `{}` failed: {source}", trace.raw_query)]
pub struct ReformulateError {
    #[source]
    pub source: ReaderError,
    pub trace: Box<ReformulationTrace>,
}

enum Outcome {
    Apply(SpanAnswer),
    Skip(Option<SpanAnswer>, SkipReason),
}

pub struct Reformulator {
    reader: Arc<dyn Reader>,
    tagger: Arc<dyn PosTagger>,
    inventory: PronounInventory,
    config: Config,
}

impl Reformulator {
    pub fn new(reader: Arc<dyn Reader>, config: Config) -> Self {
        Reformulator {
            reader,
            tagger: Arc::new(RuleTagger),
            inventory: PronounInventory::default(),
            config,
        }
    }

    pub fn with_tagger(mut self, tagger: Arc<dyn PosTagger>) -> Self {
        self.tagger = tagger;
        self
    }

    pub fn with_inventory(mut self, inventory: PronounInventory) -> Self {
        self.inventory = inventory;
        self
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    fn ask(&self, question: &str, context: &DialogueContext, target: &str) -> std::result::Result<Outcome, ReaderError> {
        if context.is_empty() {
            return Ok(Outcome::Skip(None, SkipReason::EmptyContext));
        }
        let input = build_reader_input(question, context, &self.config)?;
        let answer = match extract_span(self.reader.as_ref(), &input) {
            Ok(a) => a,
            Err(ReaderError::NoContext) => return Ok(Outcome::Skip(None, SkipReason::EmptyContext)),
            Err(ReaderError::NoAnswer(_)) => return Ok(Outcome::Skip(None, SkipReason::NoAnswer)),
            Err(ReaderError::NonExtractive { .. }) => return Ok(Outcome::Skip(None, SkipReason::NonExtractive)),
            Err(e) => return Err(e),
        };
        if answer.score < self.config.min_answer_score {
            return Ok(Outcome::Skip(Some(answer), SkipReason::LowScore));
        }
        if answer.text.trim().to_lowercase() == target.to_lowercase() {
            return Ok(Outcome::Skip(Some(answer), SkipReason::EchoesTarget));
        }
        Ok(Outcome::Apply(answer))
    }

    /// Replaces each pronoun in `query` with the reader's referent, left to
    /// right. Possessives keep a trailing `'s`.
    pub fn resolve_coreference(
        &self,
        query: &str,
        context: &DialogueContext,
    ) -> std::result::Result<(String, Vec<CorefStep>), StepFailure<CorefStep>> {
        let tokens = self.tagger.tag(query);
        let mentions = detect_pronouns(&tokens, &self.inventory);
        let mut text = query.to_string();
        let mut shift: isize = 0;
        let mut steps = Vec::with_capacity(mentions.len());

        for mention in mentions {
            let question = make_coref_question(&mention.surface, query);
            let mut step = CorefStep {
                pronoun: mention.clone(),
                question: question.clone(),
                answer: None,
                applied: false,
                skip_reason: None,
            };
            match self.ask(&question, context, &mention.surface) {
                Ok(Outcome::Apply(answer)) => {
                    let replacement = if mention.is_possessive {
                        format!("{}'s", answer.text)
                    } else {
                        answer.text.clone()
                    };
                    let start = (mention.char_start as isize + shift) as usize;
                    let end = (mention.char_end as isize + shift) as usize;
                    let (b0, b1) = (byte_offset(&text, start), byte_offset(&text, end));
                    text.replace_range(b0..b1, &replacement);
                    shift += replacement.chars().count() as isize - (end - start) as isize;
                    step.answer = Some(answer);
                    step.applied = true;
                }
                Ok(Outcome::Skip(answer, reason)) => {
                    step.answer = answer;
                    step.skip_reason = Some(reason);
                }
                Err(error) => {
                    step.skip_reason = Some(SkipReason::ReaderFailed);
                    steps.push(step);
                    return Err(StepFailure { error, text, steps });
                }
            }
            steps.push(step);
        }
        Ok((text, steps))
    }

    /// Appends `{preposition} {answer}` after every bare important word
    /// found in `q_star`, left to right.
    pub fn resolve_omission(
        &self,
        q_star: &str,
        context: &DialogueContext,
        idf: &IdfTable,
    ) -> std::result::Result<(String, Vec<OmissionStep>), StepFailure<OmissionStep>> {
        let tokens = self.tagger.tag(q_star);
        let candidates = find_omission_candidates(&tokens, idf, &OmissionRules::from_config(&self.config));
        let mut text = q_star.to_string();
        let mut shift: isize = 0;
        let mut steps = Vec::with_capacity(candidates.len());

        for candidate in candidates {
            let preposition = candidate.kind.preposition();
            let question = make_omission_question(&candidate.surface, candidate.kind, q_star);
            let mut step = OmissionStep {
                candidate: candidate.clone(),
                preposition: preposition.to_string(),
                question: question.clone(),
                answer: None,
                applied: false,
                skip_reason: None,
            };
            match self.ask(&question, context, &candidate.surface) {
                Ok(Outcome::Apply(answer)) if text.to_lowercase().contains(&answer.text.to_lowercase()) => {
                    step.answer = Some(answer);
                    step.skip_reason = Some(SkipReason::AlreadyPresent);
                }
                Ok(Outcome::Apply(answer)) => {
                    let insertion = format!(" {preposition} {}", answer.text);
                    let at = (candidate.char_end as isize + shift) as usize;
                    text.insert_str(byte_offset(&text, at), &insertion);
                    shift += insertion.chars().count() as isize;
                    step.answer = Some(answer);
                    step.applied = true;
                }
                Ok(Outcome::Skip(answer, reason)) => {
                    step.answer = answer;
                    step.skip_reason = Some(reason);
                }
                Err(error) => {
                    step.skip_reason = Some(SkipReason::ReaderFailed);
                    steps.push(step);
                    return Err(StepFailure { error, text, steps });
                }
            }
            steps.push(step);
        }
        Ok((text, steps))
    }

    /// Runs the configured mode on one turn. Coreference always runs
    /// before omission so replaced pronouns can expose new bare words.
    pub fn reformulate(
        &self,
        turn: &Turn,
        context: &DialogueContext,
        idf: &IdfTable,
    ) -> std::result::Result<ReformulationTrace, ReformulateError> {
        let mode = self.config.mode;
        let mut trace = ReformulationTrace::passthrough(&turn.raw_query, mode);
        if mode == Mode::Passthrough {
            return Ok(trace);
        }

        if matches!(mode, Mode::Full | Mode::CorefOnly) {
            match self.resolve_coreference(&turn.raw_query, context) {
                Ok((q_star, steps)) => {
                    trace.q_star = q_star.clone();
                    trace.q_double_star = q_star;
                    trace.coref_steps = steps;
                }
                Err(failure) => {
                    trace.q_star = failure.text.clone();
                    trace.q_double_star = failure.text;
                    trace.coref_steps = failure.steps;
                    return Err(ReformulateError {
                        source: failure.error,
                        trace: Box::new(trace),
                    });
                }
            }
        }

        if matches!(mode, Mode::Full | Mode::OmissionOnly) {
            match self.resolve_omission(&trace.q_star, context, idf) {
                Ok((q_double_star, steps)) => {
                    trace.q_double_star = q_double_star;
                    trace.omission_steps = steps;
                }
                Err(failure) => {
                    trace.q_double_star = failure.text;
                    trace.omission_steps = failure.steps;
                    return Err(ReformulateError {
                        source: failure.error,
                        trace: Box::new(trace),
                    });
                }
            }
        }
        Ok(trace)
    }
}

/// Writes one JSON trace per line.
pub fn write_traces(traces: &[ReformulationTrace], path: &Path) -> Result<()> {
    fs::write(path, traces_to_jsonl(traces)).map_err(|e| Error::io(path, e))
}

pub fn traces_to_jsonl(traces: &[ReformulationTrace]) -> String {
    let mut out = String::new();
    for t in traces {
        out.push_str(&serde_json::to_string(t).expect("trace serializes"));
        out.push('\n');
    }
    out
}

pub fn read_traces(path: &Path) -> Result<Vec<ReformulationTrace>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut traces = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let trace = serde_json::from_str(&line)
            .map_err(|e| Error::parse(format!("{}:{}", path.display(), i + 1), e.to_string()))?;
        traces.push(trace);
    }
    Ok(traces)
}
