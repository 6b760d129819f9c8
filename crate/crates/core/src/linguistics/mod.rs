//! Tokenization, coarse tagging, and ambiguity detection.

pub mod detect;
pub mod tagger;
pub mod tokenize;

pub use detect::{
    detect_pronouns, find_omission_candidates, OmissionCandidate, OmissionKind, OmissionRules,
    PronounInventory, PronounMention,
};
pub use tagger::{tokenize_and_tag, Pos, PosTagger, RuleTagger, TaggedToken};
pub use tokenize::{char_len, char_slice, count_tokens, normalize_terms, tokenize, Token, TokenKind};
