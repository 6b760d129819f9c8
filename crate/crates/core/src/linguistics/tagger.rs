//! Coarse part-of-speech tagging.
//!
//! [`RuleTagger`] is a deterministic lexicon-plus-suffix tagger with a small
//! contextual pass. It is good enough for short search queries and never
//! changes between releases of a model; a statistical tagger can be plugged
//! in through [`PosTagger`] as long as it emits the same coarse tag set.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::tokenize::{tokenize, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    /// Preposition.
    Adp,
    Pron,
    Det,
    Other,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adp => "ADP",
            Pos::Pron => "PRON",
            Pos::Det => "DET",
            Pos::Other => "OTHER",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub text: String,
    pub lemma: String,
    pub pos: Pos,
    pub char_start: usize,
    pub char_end: usize,
}

pub trait PosTagger: Send + Sync {
    fn tag(&self, text: &str) -> Vec<TaggedToken>;
}

/// Tags with the built-in [`RuleTagger`].
pub fn tokenize_and_tag(text: &str) -> Vec<TaggedToken> {
    RuleTagger.tag(text)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RuleTagger;

pub fn is_auxiliary(lemma: &str) -> bool {
    matches!(
        lemma,
        "is" | "are" | "was" | "were" | "be" | "been" | "being" | "am"
            | "do" | "does" | "did" | "have" | "has" | "had" | "having"
            | "can" | "could" | "will" | "would" | "shall" | "should"
            | "may" | "might" | "must"
    )
}

fn is_subject_pronoun(lemma: &str) -> bool {
    matches!(lemma, "i" | "we" | "you" | "they" | "he" | "she")
}

fn is_demonstrative(lemma: &str) -> bool {
    matches!(lemma, "this" | "that" | "these" | "those")
}

fn closed_class(lemma: &str) -> Option<Pos> {
    let pos = match lemma {
        "i" | "me" | "you" | "we" | "us" | "he" | "him" | "she" | "her" | "it" | "they"
        | "them" | "his" | "hers" | "its" | "their" | "theirs" | "mine" | "yours" | "ours"
        | "myself" | "yourself" | "himself" | "herself" | "itself" | "ourselves"
        | "themselves" | "ones" => Pos::Pron,
        "a" | "an" | "the" | "this" | "that" | "these" | "those" | "some" | "any" | "each"
        | "every" | "no" | "all" | "both" | "either" | "neither" | "another" | "my" | "your"
        | "our" => Pos::Det,
        "of" | "to" | "in" | "on" | "at" | "for" | "with" | "from" | "by" | "about" | "into"
        | "onto" | "over" | "under" | "between" | "through" | "during" | "without" | "within"
        | "than" | "after" | "before" | "like" | "against" | "among" | "across" | "around"
        | "via" | "per" | "near" | "versus" | "vs" | "toward" | "towards" | "upon"
        | "behind" | "beyond" | "besides" | "since" | "until" | "despite" | "except"
        | "inside" | "outside" | "along" | "beside" | "below" | "above" => Pos::Adp,
        "and" | "or" | "but" | "nor" | "so" | "if" | "because" | "while" | "although"
        | "though" | "whether" | "unless" | "what" | "which" | "who" | "whom" | "whose"
        | "when" | "where" | "why" | "how" | "not" | "very" | "also" | "too" | "just"
        | "often" | "most" | "less" | "least" | "really" | "there" | "here" | "then" | "now"
        | "once" | "always" | "never" | "still" | "even" | "again" | "only" | "out" | "up"
        | "down" | "off" | "away" | "back" | "ever" | "already" | "yet" | "usually"
        | "wow" | "oh" | "ah" | "yes" | "ok" | "okay" | "please" | "thanks" | "hi"
        | "hello" | "well" | "one" | "else" | "instead" | "however" | "anyway" => Pos::Other,
        _ => return None,
    };
    Some(pos)
}

fn open_class(lemma: &str) -> Option<Pos> {
    let pos = match lemma {
        "common" | "main" | "good" | "better" | "best" | "bad" | "worse" | "worst" | "new"
        | "old" | "big" | "small" | "large" | "high" | "low" | "different" | "same"
        | "other" | "important" | "safe" | "deadly" | "likely" | "possible" | "available"
        | "first" | "last" | "long" | "short" | "major" | "minor" | "general" | "specific"
        | "typical" | "normal" | "free" | "full" | "easy" | "hard" | "early" | "late"
        | "popular" | "famous" | "local" | "recent" | "similar" | "certain" | "real"
        | "whole" | "true" | "false" | "right" | "wrong" | "top" | "more" | "many" | "much"
        | "few" | "several" | "such" | "own" | "great" | "little" | "next" | "previous"
        | "best-known" | "average" | "cheap" | "expensive" | "healthy" | "sick" | "fast"
        | "slow" | "hot" | "cold" | "young" | "rare" | "usual" | "difficult" | "necessary"
        | "simple" | "basic" | "key" | "primary" | "secondary" | "final" | "total" => Pos::Adj,
        "spread" | "spreads" | "need" | "needs" | "cause" | "causes" | "caused" | "treat" | "treats"
        | "make" | "makes" | "made" | "get" | "gets" | "got" | "go" | "goes" | "went"
        | "take" | "takes" | "took" | "use" | "uses" | "know" | "knows" | "knew" | "think"
        | "thinks" | "thought" | "say" | "says" | "said" | "find" | "finds" | "found"
        | "help" | "helps" | "start" | "starts" | "stop" | "stops" | "happen" | "happens"
        | "prevent" | "prevents" | "cure" | "cures" | "diagnose" | "compare" | "affect"
        | "affects" | "become" | "becomes" | "became" | "mean" | "means" | "meant" | "want"
        | "wants" | "tell" | "tells" | "told" | "show" | "shows" | "keep" | "keeps" | "give"
        | "gives" | "gave" | "live" | "lives" | "die" | "dies" | "eat" | "eats" | "grow"
        | "grows" | "buy" | "sell" | "sells" | "sold" | "pay" | "cost" | "costs" | "apply"
        | "survive" | "break" | "breaks" | "broke" | "open" | "recommend" | "improve"
        | "reduce" | "increase" | "learn" | "see" | "look" | "feel" | "feels" | "park"
        | "run" | "runs" | "work" | "works" | "leave" | "come" | "comes" | "came" | "let"
        | "put" | "mix" | "serve" | "obtain" | "require" | "requires" | "begin" => Pos::Verb,
        _ => return None,
    };
    Some(pos)
}

fn suffix_class(lemma: &str) -> Option<Pos> {
    const ADJ_SUFFIXES: [&str; 9] = ["ous", "ful", "ive", "able", "ible", "less", "ic", "ical", "ish"];
    if lemma.chars().count() <= 3 {
        return None;
    }
    if lemma.ends_with("ly") {
        return Some(Pos::Other);
    }
    if ADJ_SUFFIXES.iter().any(|s| lemma.ends_with(s)) {
        return Some(Pos::Adj);
    }
    if lemma.ends_with("ing") || lemma.ends_with("ed") {
        return Some(Pos::Verb);
    }
    None
}

impl PosTagger for RuleTagger {
    fn tag(&self, text: &str) -> Vec<TaggedToken> {
        let tokens = tokenize(text);
        let mut tagged: Vec<TaggedToken> = Vec::with_capacity(tokens.len());
        let mut sentence_start = true;
        for tok in &tokens {
            let lemma = tok.text.to_lowercase();
            let pos = match tok.kind {
                TokenKind::Punct | TokenKind::Clitic => Pos::Other,
                TokenKind::Word if lemma.chars().all(|c| c.is_numeric()) => Pos::Other,
                TokenKind::Word => closed_class(&lemma).or_else(|| is_auxiliary(&lemma).then_some(Pos::Verb)).unwrap_or_else(|| {
                    let capitalized = tok.text.chars().next().is_some_and(char::is_uppercase);
                    if capitalized && !sentence_start {
                        Pos::Noun
                    } else {
                        open_class(&lemma).or_else(|| suffix_class(&lemma)).unwrap_or(Pos::Noun)
                    }
                }),
            };
            sentence_start = tok.kind == TokenKind::Punct && matches!(tok.text.as_str(), "." | "?" | "!");
            tagged.push(TaggedToken {
                text: tok.text.clone(),
                lemma,
                pos,
                char_start: tok.char_start,
                char_end: tok.char_end,
            });
        }
        contextual_pass(&mut tagged);
        tagged
    }
}

fn contextual_pass(tokens: &mut [TaggedToken]) {
    for i in 0..tokens.len() {
        let prev = i.checked_sub(1).map(|j| tokens[j].pos);
        let prev_lemma = i.checked_sub(1).map(|j| tokens[j].lemma.clone());
        let next = tokens.get(i + 1).map(|t| t.pos);
        let lemma = tokens[i].lemma.as_str();

        let after_next = tokens.get(i + 2).map(|t| t.pos);
        let retag = if is_demonstrative(lemma) {
            match next {
                _ if lemma == "that" && prev == Some(Pos::Noun) => Some(Pos::Other),
                Some(Pos::Noun) => Some(Pos::Det),
                Some(Pos::Adj) if after_next == Some(Pos::Noun) => Some(Pos::Det),
                Some(Pos::Pron | Pos::Det) => Some(Pos::Other),
                _ => Some(Pos::Pron),
            }
        } else if lemma == "one" {
            let anaphoric = matches!(prev, Some(Pos::Adj | Pos::Det)) && !matches!(next, Some(Pos::Noun | Pos::Adj));
            anaphoric.then_some(Pos::Pron)
        } else if tokens[i].pos == Pos::Verb && lemma.ends_with("ing") && !is_auxiliary(lemma) {
            matches!(prev, Some(Pos::Det | Pos::Adj | Pos::Noun)).then_some(Pos::Noun)
        } else if tokens[i].pos == Pos::Verb && lemma.ends_with("ed") && prev == Some(Pos::Det) {
            Some(Pos::Adj)
        } else if tokens[i].pos == Pos::Noun && prev_lemma.as_deref().is_some_and(is_subject_pronoun) {
            Some(Pos::Verb)
        } else {
            None
        };
        if let Some(pos) = retag {
            tokens[i].pos = pos;
        }
    }
}
