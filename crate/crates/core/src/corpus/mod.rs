//! Corpus ingestion, tokenization, and an exact-count inverted index.
//!
//! Every document plays the role of one "story" in the information space: a
//! document counts once toward a query's hit count no matter how often a term
//! occurs inside it, mirroring page-level hit counting.

mod index;
mod query;

pub use index::{build_index, read_corpus, read_corpus_from_reader, Index, IndexError};
pub use query::{Query, QueryError};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// One document of a corpus.
///
/// Invariants: `id` is unique within a corpus and `text` is non-empty after
/// whitespace trimming (both enforced by [`build_index`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            meta: BTreeMap::new(),
        }
    }
}

/// What constitutes a single token.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenPattern {
    /// Maximal runs of Unicode letters and digits; everything else separates.
    #[default]
    Alphanumeric,
}

/// Deterministic tokenization settings.
///
/// Stop words are *not* dropped from the index — they only inform diagnostic
/// reporting (dropping them would silently change every statistic that is
/// relative to the total document count).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    #[serde(default = "default_case_folding")]
    pub case_folding: bool,
    #[serde(default)]
    pub pattern: TokenPattern,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub stop_words: BTreeSet<String>,
}

fn default_case_folding() -> bool {
    true
}

impl TokenizerConfig {
    pub fn new() -> Self {
        TokenizerConfig {
            case_folding: true,
            pattern: TokenPattern::Alphanumeric,
            stop_words: BTreeSet::new(),
        }
    }
}

/// Split `text` into normalized tokens.
///
/// Same text and config always yield the same token sequence; empty input
/// yields an empty sequence. No stemming is performed: terms that differ in
/// morphology stay distinct.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let TokenPattern::Alphanumeric = config.pattern;
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            if config.case_folding {
                for folded in ch.to_lowercase() {
                    current.push(folded);
                }
            } else {
                current.push(ch);
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_folds_case_and_splits_punctuation() {
        let cfg = TokenizerConfig::new();
        assert_eq!(tokenize("Pet fish, pet!", &cfg), vec!["pet", "fish", "pet"]);
    }

    #[test]
    fn tokenize_empty_input() {
        let cfg = TokenizerConfig::new();
        assert_eq!(tokenize("", &cfg), Vec::<String>::new());
    }

    #[test]
    fn tokenize_keeps_digits() {
        let cfg = TokenizerConfig::new();
        assert_eq!(tokenize("Linda is 31", &cfg), vec!["linda", "is", "31"]);
    }

    #[test]
    fn tokenize_hyphenated_splits() {
        let cfg = TokenizerConfig::new();
        assert_eq!(tokenize("Pet-Fish", &cfg), vec!["pet", "fish"]);
    }

    #[test]
    fn tokenize_without_folding_preserves_case() {
        let cfg = TokenizerConfig {
            case_folding: false,
            ..TokenizerConfig::new()
        };
        assert_eq!(tokenize("Pet Fish", &cfg), vec!["Pet", "Fish"]);
    }

    #[test]
    fn tokenize_is_deterministic() {
        let cfg = TokenizerConfig::new();
        let text = "Straße 42 — östlich; Pet-Fish!";
        assert_eq!(tokenize(text, &cfg), tokenize(text, &cfg));
    }
}
