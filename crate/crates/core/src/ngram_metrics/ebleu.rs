use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::bleu::{brevity_penalty, closest_ref_length};
use super::validate_corpus;
use crate::align_metrics::LanguageResources;
use crate::error::{Error, Result};
use crate::textcore::{ngrams, TokenSequence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EbleuConfig {
    /// Credit multiplier for a token matched only through a synonym.
    pub synonym_score: f64,
    /// Fraction of the distinct reference vocabulary, taken from the least
    /// frequent end, treated as rare.
    pub rare_words_percent: f64,
    /// Credit multiplier for an n-gram containing a rare word.
    pub rare_words_score: f64,
    pub max_n: usize,
}

impl Default for EbleuConfig {
    fn default() -> Self {
        EbleuConfig {
            synonym_score: 0.9,
            rare_words_percent: 0.05,
            rare_words_score: 1.1,
            max_n: 4,
        }
    }
}

impl EbleuConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.synonym_score > 0.0 && self.synonym_score <= 1.0) {
            return Err(Error::InvalidConfig("synonym score must lie in (0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.rare_words_percent) {
            return Err(Error::InvalidConfig(
                "rare words percent must lie in [0, 1]".into(),
            ));
        }
        if !(self.rare_words_score >= 1.0 && self.rare_words_score.is_finite()) {
            return Err(Error::InvalidConfig("rare words score must be >= 1".into()));
        }
        if self.max_n == 0 {
            return Err(Error::InvalidConfig("EBLEU max_n must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EbleuScore {
    pub score: f64,
    pub brevity_penalty: f64,
    /// Per-order base score; `None` where no hypothesis reaches that length.
    pub per_order_base: Vec<Option<f64>>,
    /// Running geometric mean of the defined base scores up to each order.
    pub cumulative: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchKind {
    Exact,
    Synonym,
    Miss,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedToken {
    /// The token used for n-gram matching: the reference word for synonyms.
    pub token: String,
    pub original: String,
    pub kind: MatchKind,
}

/// Marks each hypothesis token as an exact match, a synonym of some reference
/// word (rewritten to that word), or a miss. Exact matches take priority;
/// among several synonyms present, the first in reference order wins.
pub fn synonym_expand(
    hyp: &TokenSequence,
    refs: &[TokenSequence],
    resources: &LanguageResources,
) -> Vec<AnnotatedToken> {
    let vocabulary: HashSet<&str> = refs.iter().flat_map(|r| r.iter()).map(String::as_str).collect();
    hyp.iter()
        .map(|word| {
            if vocabulary.contains(word.as_str()) {
                return AnnotatedToken {
                    token: word.clone(),
                    original: word.clone(),
                    kind: MatchKind::Exact,
                };
            }
            let replacement = resources.synonyms_of(word).and_then(|syns| {
                refs.iter()
                    .flat_map(|r| r.iter())
                    .find(|candidate| syns.contains(candidate.as_str()))
            });
            match replacement {
                Some(target) => AnnotatedToken {
                    token: target.clone(),
                    original: word.clone(),
                    kind: MatchKind::Synonym,
                },
                None => AnnotatedToken {
                    token: word.clone(),
                    original: word.clone(),
                    kind: MatchKind::Miss,
                },
            }
        })
        .collect()
}

/// Rare words of a reference corpus: distinct words sorted by descending
/// frequency (ties lexicographic), the trailing `percent` fraction (floored).
pub fn rare_words(ref_corpus: &[Vec<TokenSequence>], percent: f64) -> HashSet<String> {
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for word in ref_corpus.iter().flatten().flat_map(|r| r.iter()) {
        *freq.entry(word.as_str()).or_insert(0) += 1;
    }
    let mut ranked: Vec<(&str, usize)> = freq.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let take = (percent * ranked.len() as f64).floor() as usize;
    ranked[ranked.len() - take.min(ranked.len())..]
        .iter()
        .map(|(w, _)| (*w).to_owned())
        .collect()
}

/// EBLEU scorer bound to a reference corpus (for rare-word extraction) and
/// a resource bundle (for synonyms).
#[derive(Debug, Clone)]
pub struct EbleuScorer<'r> {
    config: EbleuConfig,
    resources: &'r LanguageResources,
    rare: HashSet<String>,
}

impl<'r> EbleuScorer<'r> {
    pub fn new(
        ref_corpus: &[Vec<TokenSequence>],
        config: EbleuConfig,
        resources: &'r LanguageResources,
    ) -> Result<Self> {
        config.validate()?;
        let rare = rare_words(ref_corpus, config.rare_words_percent);
        Ok(EbleuScorer {
            config,
            resources,
            rare,
        })
    }

    pub fn rare(&self) -> &HashSet<String> {
        &self.rare
    }

    /// Clamped weighted matches and the n-gram total for one segment at order `n`.
    fn segment_order(
        &self,
        annotated: &[AnnotatedToken],
        rewritten: &TokenSequence,
        refs: &[TokenSequence],
        n: usize,
    ) -> (f64, usize) {
        if rewritten.len() < n {
            return (0.0, 0);
        }
        let token_factor: Vec<f64> = annotated
            .iter()
            .map(|a| match a.kind {
                MatchKind::Synonym => self.config.synonym_score,
                _ => 1.0,
            })
            .collect();
        let is_rare: Vec<bool> = rewritten.iter().map(|t| self.rare.contains(t)).collect();

        let mut occurrences: HashMap<&[String], Vec<f64>> = HashMap::new();
        for start in 0..=rewritten.len() - n {
            let span = start..start + n;
            let mut weight: f64 = token_factor[span.clone()].iter().product();
            if is_rare[span.clone()].iter().any(|&r| r) {
                weight *= self.config.rare_words_score;
            }
            occurrences.entry(&rewritten[span]).or_default().push(weight);
        }
        let ref_counts: Vec<_> = refs.iter().map(|r| ngrams(r, n)).collect();
        let mut keys: Vec<&[String]> = occurrences.keys().copied().collect();
        keys.sort_unstable();
        let mut credit = 0.0;
        for key in keys {
            let clip = ref_counts.iter().map(|r| r.get(key)).max().unwrap_or(0);
            if clip == 0 {
                continue;
            }
            let weights = occurrences.get_mut(key).expect("key from map");
            weights.sort_unstable_by(|a, b| b.total_cmp(a));
            credit += weights.iter().take(clip).sum::<f64>();
        }
        let total = rewritten.len() + 1 - n;
        (credit.min(total as f64), total)
    }

    pub fn score(
        &self,
        hyp_corpus: &[TokenSequence],
        ref_corpus: &[Vec<TokenSequence>],
    ) -> Result<EbleuScore> {
        validate_corpus(hyp_corpus, ref_corpus)?;
        let max_n = self.config.max_n;
        let mut credit = vec![0.0; max_n];
        let mut totals = vec![0usize; max_n];
        let mut hyp_length = 0;
        let mut ref_length = 0;
        for (hyp, refs) in hyp_corpus.iter().zip(ref_corpus) {
            hyp_length += hyp.len();
            ref_length += closest_ref_length(hyp.len(), refs);
            let annotated = synonym_expand(hyp, refs, self.resources);
            let rewritten: TokenSequence = annotated.iter().map(|a| a.token.clone()).collect();
            for n in 1..=max_n {
                let (c, t) = self.segment_order(&annotated, &rewritten, refs, n);
                credit[n - 1] += c;
                totals[n - 1] += t;
            }
        }
        let brevity_penalty = brevity_penalty(hyp_length, ref_length)?;
        let per_order_base: Vec<Option<f64>> = credit
            .iter()
            .zip(&totals)
            .map(|(&c, &t)| (t > 0).then(|| (c / t as f64).clamp(0.0, 1.0)))
            .collect();

        let mut cumulative = Vec::with_capacity(max_n);
        let mut log_sum = 0.0;
        let mut defined = 0usize;
        let mut last = 0.0;
        for base in &per_order_base {
            match base {
                Some(b) => {
                    log_sum += b.ln();
                    defined += 1;
                    last = (log_sum / defined as f64).exp();
                    cumulative.push(Some(last));
                }
                None => cumulative.push(None),
            }
        }
        Ok(EbleuScore {
            score: (brevity_penalty * last).clamp(0.0, 1.0),
            brevity_penalty,
            per_order_base,
            cumulative,
        })
    }
}

/// Corpus EBLEU; rare words are drawn from `ref_corpus`.
pub fn ebleu(
    hyp_corpus: &[TokenSequence],
    ref_corpus: &[Vec<TokenSequence>],
    config: &EbleuConfig,
    resources: &LanguageResources,
) -> Result<EbleuScore> {
    EbleuScorer::new(ref_corpus, config.clone(), resources)?.score(hyp_corpus, ref_corpus)
}
