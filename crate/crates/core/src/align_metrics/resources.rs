use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

pub const DEFAULT_FUNCTION_WORD_WEIGHT: f64 = 0.2;

/// Synonyms, stems and function words for one language.
///
/// File formats (UTF-8, `#` starts a comment line, blank lines ignored):
///
/// * synonyms: `word<TAB>syn1 syn2 ...`, closed under symmetry on load;
/// * stems: `word<TAB>stem1 stem2 ...`, any number of stems per word;
/// * function words: one word per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageResources {
    synonyms: BTreeMap<String, BTreeSet<String>>,
    stems: BTreeMap<String, BTreeSet<String>>,
    function_words: BTreeSet<String>,
    pub function_word_weight: f64,
}

impl Default for LanguageResources {
    fn default() -> Self {
        LanguageResources {
            synonyms: BTreeMap::new(),
            stems: BTreeMap::new(),
            function_words: BTreeSet::new(),
            function_word_weight: DEFAULT_FUNCTION_WORD_WEIGHT,
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (u64, String)> + '_ {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l.nfc().collect::<String>()))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn split_entry(line_no: u64, line: &str, what: &str) -> Result<(String, Vec<String>)> {
    let (head, tail) = line.split_once('\t').ok_or_else(|| Error::Parse {
        line: line_no,
        message: format!("expected `word<TAB>{what}...`"),
    })?;
    let head = head.trim();
    if head.is_empty() || head.contains(char::is_whitespace) {
        return Err(Error::Parse {
            line: line_no,
            message: format!("invalid headword `{head}`"),
        });
    }
    let values: Vec<String> = tail.split_whitespace().map(str::to_owned).collect();
    if values.is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: format!("`{head}` lists no {what}"),
        });
    }
    Ok((head.to_owned(), values))
}

impl LanguageResources {
    pub fn with_synonyms(mut self, text: &str) -> Result<Self> {
        for (line_no, line) in content_lines(text) {
            let (word, syns) = split_entry(line_no, &line, "synonym")?;
            for syn in syns {
                if syn == word {
                    continue;
                }
                self.synonyms.entry(word.clone()).or_default().insert(syn.clone());
                self.synonyms.entry(syn).or_default().insert(word.clone());
            }
        }
        Ok(self)
    }

    pub fn with_stems(mut self, text: &str) -> Result<Self> {
        for (line_no, line) in content_lines(text) {
            let (word, stems) = split_entry(line_no, &line, "stem")?;
            self.stems.entry(word).or_default().extend(stems);
        }
        Ok(self)
    }

    pub fn with_function_words(mut self, text: &str) -> Result<Self> {
        for (line_no, line) in content_lines(text) {
            let word = line.trim();
            if word.contains(char::is_whitespace) {
                return Err(Error::Parse {
                    line: line_no,
                    message: "function word lines hold a single word".into(),
                });
            }
            self.function_words.insert(word.to_owned());
        }
        Ok(self)
    }

    pub fn with_function_word_weight(mut self, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidConfig(
                "function word weight must lie in [0, 1]".into(),
            ));
        }
        self.function_word_weight = weight;
        Ok(self)
    }

    /// Loads whichever resource files are given.
    pub fn from_files(
        synonyms: Option<&Path>,
        stems: Option<&Path>,
        function_words: Option<&Path>,
    ) -> Result<Self> {
        let read = |p: &Path| {
            fs::read_to_string(p)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))
        };
        let mut res = LanguageResources::default();
        if let Some(p) = synonyms {
            res = res.with_synonyms(&read(p)?)?;
        }
        if let Some(p) = stems {
            res = res.with_stems(&read(p)?)?;
        }
        if let Some(p) = function_words {
            res = res.with_function_words(&read(p)?)?;
        }
        Ok(res)
    }

    pub fn is_empty(&self) -> bool {
        self.synonyms.is_empty() && self.stems.is_empty() && self.function_words.is_empty()
    }

    pub fn synonyms_of(&self, word: &str) -> Option<&BTreeSet<String>> {
        self.synonyms.get(word)
    }

    pub fn are_synonyms(&self, a: &str, b: &str) -> bool {
        self.synonyms.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn has_stems(&self) -> bool {
        !self.stems.is_empty()
    }

    pub fn has_synonyms(&self) -> bool {
        !self.synonyms.is_empty()
    }

    /// Stems of `word`; a word missing from the table is its own stem.
    pub fn stems_of<'a>(&'a self, word: &'a str) -> Vec<&'a str> {
        match self.stems.get(word) {
            Some(set) => set.iter().map(String::as_str).collect(),
            None => vec![word],
        }
    }

    pub fn share_stem(&self, a: &str, b: &str) -> bool {
        let sa = self.stems_of(a);
        self.stems_of(b).iter().any(|s| sa.contains(s))
    }

    pub fn is_function_word(&self, word: &str) -> bool {
        self.function_words.contains(word)
    }

    /// Weight of a token in METEOR precision and recall.
    pub fn token_weight(&self, word: &str) -> f64 {
        if self.is_function_word(word) {
            self.function_word_weight
        } else {
            1.0
        }
    }
}
