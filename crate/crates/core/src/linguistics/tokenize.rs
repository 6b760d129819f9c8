//! The single tokenizer shared by tagging, IDF statistics, retrieval, and
//! reader budgeting. Offsets are in Unicode scalar values (chars).

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    /// Apostrophe suffix attached to a word: `'s`, `'t`, `'re`.
    Clitic,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub char_start: usize,
    pub char_end: usize,
    pub bytes: Range<usize>,
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into words (alphanumeric runs, joined across inner hyphens),
/// apostrophe clitics, and single-character punctuation.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let alnum_at = |i: usize| chars.get(i).is_some_and(|&(_, c)| c.is_alphanumeric());

    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_alphanumeric() {
            i += 1;
            loop {
                if alnum_at(i) {
                    i += 1;
                } else if chars.get(i).is_some_and(|&(_, c)| c == '-') && alnum_at(i + 1) {
                    i += 2;
                } else {
                    break;
                }
            }
            TokenKind::Word
        } else if is_apostrophe(c) && alnum_at(i + 1) && i > 0 && alnum_at(i - 1) {
            i += 1;
            while alnum_at(i) {
                i += 1;
            }
            TokenKind::Clitic
        } else {
            i += 1;
            TokenKind::Punct
        };
        let bytes = byte_at(start)..byte_at(i);
        tokens.push(Token {
            text: text[bytes.clone()].to_string(),
            kind,
            char_start: start,
            char_end: i,
            bytes,
        });
    }
    tokens
}

pub fn count_tokens(text: &str) -> usize {
    tokenize(text).len()
}

/// Keeps the first `max_tokens` tokens of `text`, cutting the tail.
/// Returns the kept prefix and whether anything was removed.
pub fn truncate_to_tokens(text: &str, max_tokens: usize) -> (&str, bool) {
    let tokens = tokenize(text);
    if tokens.len() <= max_tokens {
        return (text, false);
    }
    let end = max_tokens.checked_sub(1).map_or(0, |i| tokens[i].bytes.end);
    (&text[..end], true)
}

/// Lowercased word tokens; the term identity used by IDF tables and indexes.
pub fn normalize_terms(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.text.to_lowercase())
        .collect()
}

pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Slices `text` by char offsets; `None` when out of bounds or reversed.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut indices = text.char_indices().map(|(b, _)| b).chain(std::iter::once(text.len()));
    let from = indices.nth(start)?;
    let to = if end == start {
        from
    } else {
        indices.nth(end - start - 1)?
    };
    Some(&text[from..to])
}

/// Byte offset of char index `idx` (clamped to the end of the string).
pub fn byte_offset(text: &str, idx: usize) -> usize {
    text.char_indices().nth(idx).map_or(text.len(), |(b, _)| b)
}
