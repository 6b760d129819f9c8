//! The two ambiguity detectors: pronouns that need a referent, and
//! important nouns or verbs that lack a disambiguating modifier.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tagger::{is_auxiliary, Pos, TaggedToken};
use crate::datamodel::{Config, PostmodifierRule};
use crate::error::{Error, Result};
use crate::ingest::IdfTable;

const DEFAULT_PRONOUNS: [&str; 18] = [
    "he", "him", "she", "her", "it", "they", "them", "his", "hers", "its", "their", "theirs",
    "this", "that", "these", "those", "one", "ones",
];

const POSSESSIVES: [&str; 5] = ["his", "hers", "its", "their", "theirs"];

/// Closed list of pronouns eligible for coreference resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounInventory {
    words: BTreeSet<String>,
}

impl Default for PronounInventory {
    fn default() -> Self {
        PronounInventory {
            words: DEFAULT_PRONOUNS.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl PronounInventory {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        PronounInventory {
            words: words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).filter(|w| !w.is_empty()).collect(),
        }
    }

    /// One word per line; blank lines and `#` comments are ignored.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(
            text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')),
        ))
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.words.contains(lemma)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PronounMention {
    pub token_index: usize,
    pub surface: String,
    pub is_possessive: bool,
    pub char_start: usize,
    pub char_end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmissionKind {
    Noun,
    Verb,
}

impl OmissionKind {
    /// `of` for nouns, `to` for verbs.
    pub fn preposition(self) -> &'static str {
        match self {
            OmissionKind::Noun => "of",
            OmissionKind::Verb => "to",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmissionCandidate {
    pub token_index: usize,
    pub surface: String,
    pub kind: OmissionKind,
    pub idf: f64,
    pub char_start: usize,
    pub char_end: usize,
}

/// Pronoun mentions in left-to-right order. Only tokens the tagger marked
/// as pronouns count, so determiner uses ("that book") are skipped.
pub fn detect_pronouns(tokens: &[TaggedToken], inventory: &PronounInventory) -> Vec<PronounMention> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.pos == Pos::Pron && inventory.contains(&t.lemma))
        .map(|(i, t)| {
            let is_possessive = POSSESSIVES.contains(&t.lemma.as_str())
                || (t.lemma == "her" && tokens.get(i + 1).is_some_and(|n| matches!(n.pos, Pos::Noun | Pos::Adj)));
            PronounMention {
                token_index: i,
                surface: t.text.clone(),
                is_possessive,
                char_start: t.char_start,
                char_end: t.char_end,
            }
        })
        .collect()
}

/// Thresholds and modifier rules for omission detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmissionRules {
    /// A noun or verb must score strictly above this IDF to be considered.
    pub threshold: f64,
    /// A premodifier disambiguates only when its own IDF exceeds this.
    pub premodifier_threshold: f64,
    pub postmodifier: PostmodifierRule,
}

impl OmissionRules {
    pub fn new(threshold: f64) -> Self {
        OmissionRules {
            threshold,
            premodifier_threshold: threshold,
            postmodifier: PostmodifierRule::Strict,
        }
    }

    pub fn from_config(config: &Config) -> Self {
        OmissionRules {
            threshold: config.idf_threshold,
            premodifier_threshold: config.premodifier_idf_threshold,
            postmodifier: config.postmodifier_rule,
        }
    }
}

fn is_clause_break(t: &TaggedToken) -> bool {
    matches!(t.text.as_str(), "." | "," | "?" | "!" | ";" | ":")
}

fn is_coordinator(t: &TaggedToken) -> bool {
    matches!(t.lemma.as_str(), "and" | "or")
}

fn blocks_as_postmodifier(next: &TaggedToken, kind: OmissionKind, rule: PostmodifierRule) -> bool {
    next.pos == Pos::Adp
        && match rule {
            PostmodifierRule::Strict => true,
            PostmodifierRule::Lenient => next.lemma == kind.preposition(),
        }
}

fn noun_is_bare(tokens: &[TaggedToken], i: usize, idf: &IdfTable, rules: &OmissionRules) -> bool {
    if let Some(next) = tokens.get(i + 1) {
        // Compound premodifier ("EU" in "EU rules") or possessor ("City" in "City's").
        if next.pos == Pos::Noun || next.text.starts_with('\'') || next.text.starts_with('\u{2019}') {
            return false;
        }
        // Non-final conjunct: the description attaches after the last noun.
        if is_coordinator(next) {
            let head = tokens[i + 2..].iter().find(|t| !matches!(t.pos, Pos::Adj | Pos::Det));
            if head.is_some_and(|t| t.pos == Pos::Noun) {
                return false;
            }
        }
        if blocks_as_postmodifier(next, OmissionKind::Noun, rules.postmodifier) {
            return false;
        }
    }
    if let Some(prev) = i.checked_sub(1).map(|j| &tokens[j]) {
        if matches!(prev.pos, Pos::Adj | Pos::Noun) && idf.idf(&prev.lemma) > rules.premodifier_threshold {
            return false;
        }
    }
    true
}

fn verb_is_bare(tokens: &[TaggedToken], i: usize, rules: &OmissionRules) -> bool {
    if is_auxiliary(&tokens[i].lemma) {
        return false;
    }
    if tokens.get(i + 1).is_some_and(|next| blocks_as_postmodifier(next, OmissionKind::Verb, rules.postmodifier)) {
        return false;
    }
    !tokens[i + 1..]
        .iter()
        .take_while(|t| !is_clause_break(t))
        .any(|t| t.pos == Pos::Noun)
}

/// Important nouns and verbs lacking a disambiguating modifier, in
/// left-to-right order.
pub fn find_omission_candidates(tokens: &[TaggedToken], idf: &IdfTable, rules: &OmissionRules) -> Vec<OmissionCandidate> {
    let mut out = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        let kind = match tok.pos {
            Pos::Noun => OmissionKind::Noun,
            Pos::Verb => OmissionKind::Verb,
            _ => continue,
        };
        let score = idf.idf(&tok.lemma);
        if score <= rules.threshold {
            continue;
        }
        let bare = match kind {
            OmissionKind::Noun => noun_is_bare(tokens, i, idf, rules),
            OmissionKind::Verb => verb_is_bare(tokens, i, rules),
        };
        if bare {
            out.push(OmissionCandidate {
                token_index: i,
                surface: tok.text.clone(),
                kind,
                idf: score,
                char_start: tok.char_start,
                char_end: tok.char_end,
            });
        }
    }
    out
}
