//! Tokenization and n-gram counting shared by every metric.
//!
//! Text is NFC-normalized before it is split, so precomposed and decomposed
//! diacritics (common in Polish transcripts) compare equal. N-grams never
//! cross segment boundaries: every function here works on a single
//! [`TokenSequence`].

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// How raw text is turned into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    /// Punctuation marks become standalone tokens.
    pub split_punctuation: bool,
    /// Punctuation marks are dropped.
    pub strip_punctuation: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            split_punctuation: true,
            strip_punctuation: false,
        }
    }
}

impl TokenizerConfig {
    pub fn new(lowercase: bool, split_punctuation: bool, strip_punctuation: bool) -> Result<Self> {
        let config = TokenizerConfig {
            lowercase,
            split_punctuation,
            strip_punctuation,
        };
        config.validate()?;
        Ok(config)
    }

    /// Plain whitespace splitting with no case folding or punctuation handling.
    pub fn raw() -> Self {
        TokenizerConfig {
            lowercase: false,
            split_punctuation: false,
            strip_punctuation: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.split_punctuation && self.strip_punctuation {
            return Err(Error::InvalidConfig(
                "split_punctuation and strip_punctuation are mutually exclusive".into(),
            ));
        }
        Ok(())
    }
}

/// An ordered list of non-empty tokens: one sentence or transcript line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenSequence(Vec<String>);

impl TokenSequence {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        if tokens.iter().any(|t| t.is_empty()) {
            return Err(Error::InvalidInput("tokens must be non-empty strings".into()));
        }
        Ok(TokenSequence(tokens))
    }

    /// Splits on whitespace without any normalization.
    pub fn from_whitespace(text: &str) -> Self {
        TokenSequence(text.split_whitespace().map(str::to_owned).collect())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }
}

impl Deref for TokenSequence {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

impl<S: Into<String>> FromIterator<S> for TokenSequence {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenSequence(
            iter.into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty())
                .collect(),
        )
    }
}

/// True for ASCII punctuation and the common Unicode quotation marks,
/// dashes and ellipses found in subtitle text.
pub fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c, '\u{00A1}' | '\u{00AB}' | '\u{00B7}' | '\u{00BB}' | '\u{00BF}')
        || ('\u{2010}'..='\u{2027}').contains(&c)
        || ('\u{2030}'..='\u{205E}').contains(&c)
        || ('\u{3001}'..='\u{3003}').contains(&c)
        || ('\u{3008}'..='\u{3011}').contains(&c)
}

pub fn tokenize(text: &str, config: &TokenizerConfig) -> TokenSequence {
    let mut normalized: String = text.nfc().collect();
    if config.lowercase {
        normalized = normalized.to_lowercase().nfc().collect();
    }
    let mut tokens = Vec::new();
    for chunk in normalized.split_whitespace() {
        if config.split_punctuation {
            let mut word = String::new();
            for c in chunk.chars() {
                if is_punctuation(c) {
                    if !word.is_empty() {
                        tokens.push(std::mem::take(&mut word));
                    }
                    tokens.push(c.to_string());
                } else {
                    word.push(c);
                }
            }
            if !word.is_empty() {
                tokens.push(word);
            }
        } else if config.strip_punctuation {
            let word: String = chunk.chars().filter(|c| !is_punctuation(*c)).collect();
            if !word.is_empty() {
                tokens.push(word);
            }
        } else {
            tokens.push(chunk.to_owned());
        }
    }
    TokenSequence(tokens)
}

/// Multiset of the contiguous n-grams of one sequence, borrowing from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramCounts<'a> {
    n: usize,
    counts: HashMap<&'a [String], usize>,
}

impl<'a> NGramCounts<'a> {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, gram: &[String]) -> usize {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a [String], usize)> + '_ {
        self.counts.iter().map(|(g, c)| (*g, *c))
    }
}

/// All contiguous n-grams of `seq` with multiplicity. `n` must be at least 1.
pub fn ngrams(seq: &[String], n: usize) -> NGramCounts<'_> {
    assert!(n >= 1, "n-gram order must be at least 1");
    let mut counts = HashMap::new();
    if seq.len() >= n {
        for gram in seq.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    NGramCounts { n, counts }
}

/// Σ over hypothesis n-grams of `min(hyp count, max reference count)`.
pub fn clipped_matches(hyp: &NGramCounts<'_>, refs: &[NGramCounts<'_>]) -> usize {
    debug_assert!(refs.iter().all(|r| r.n == hyp.n));
    hyp.counts
        .iter()
        .map(|(gram, &count)| {
            let max_ref = refs.iter().map(|r| r.get(gram)).max().unwrap_or(0);
            count.min(max_ref)
        })
        .sum()
}
