use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::validate_corpus;
use crate::error::{Error, Result};
use crate::textcore::{ngrams, TokenSequence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NistConfig {
    pub max_n: usize,
    /// Length-penalty steepness; the default makes the factor 0.5 at a
    /// hypothesis/reference length ratio of 2/3.
    pub brevity_beta: f64,
}

impl Default for NistConfig {
    fn default() -> Self {
        NistConfig {
            max_n: 5,
            brevity_beta: default_brevity_beta(),
        }
    }
}

pub fn default_brevity_beta() -> f64 {
    0.5f64.ln() / (2.0f64 / 3.0).ln().powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NistScore {
    pub score: f64,
    /// Information-weighted match rate per order, before the length factor.
    pub per_order: Vec<f64>,
    pub brevity_factor: f64,
    pub hyp_length: usize,
    /// Sum over segments of the mean reference length.
    pub ref_length: f64,
}

/// Information weights learned from a reference corpus.
///
/// `info(w1..wn) = log2(count(w1..wn-1) / count(w1..wn))`, where the
/// unigram "prefix" count is the total number of reference words.
#[derive(Debug, Clone)]
pub struct NistScorer<'a> {
    config: NistConfig,
    counts: HashMap<&'a [String], usize>,
    total_words: usize,
}

impl<'a> NistScorer<'a> {
    pub fn new(ref_corpus: &'a [Vec<TokenSequence>], config: NistConfig) -> Result<Self> {
        if config.max_n == 0 {
            return Err(Error::InvalidConfig("NIST max_n must be at least 1".into()));
        }
        if !config.brevity_beta.is_finite() {
            return Err(Error::InvalidConfig("NIST brevity beta must be finite".into()));
        }
        let mut counts = HashMap::new();
        let mut total_words = 0;
        for reference in ref_corpus.iter().flatten() {
            total_words += reference.len();
            for n in 1..=config.max_n {
                for (gram, c) in ngrams(reference, n).iter() {
                    *counts.entry(gram).or_insert(0) += c;
                }
            }
        }
        Ok(NistScorer {
            config,
            counts,
            total_words,
        })
    }

    pub fn config(&self) -> &NistConfig {
        &self.config
    }

    /// Information weight of an n-gram seen in the references, `None` otherwise.
    pub fn info(&self, gram: &[String]) -> Option<f64> {
        let count = *self.counts.get(gram)?;
        let prefix = if gram.len() == 1 {
            self.total_words
        } else {
            *self.counts.get(&gram[..gram.len() - 1])?
        };
        Some((prefix as f64 / count as f64).log2())
    }

    pub fn brevity_factor(&self, hyp_length: usize, ref_length: f64) -> f64 {
        if ref_length <= 0.0 {
            return 1.0;
        }
        let ratio = (hyp_length as f64 / ref_length).min(1.0);
        if ratio <= 0.0 {
            return 0.0;
        }
        (self.config.brevity_beta * ratio.ln().powi(2)).exp()
    }

    pub fn score(
        &self,
        hyp_corpus: &[TokenSequence],
        ref_corpus: &[Vec<TokenSequence>],
    ) -> Result<NistScore> {
        validate_corpus(hyp_corpus, ref_corpus)?;
        let max_n = self.config.max_n;
        let mut info_sums = vec![0.0; max_n];
        let mut totals = vec![0usize; max_n];
        let mut hyp_length = 0;
        let mut ref_length = 0.0;
        for (hyp, refs) in hyp_corpus.iter().zip(ref_corpus) {
            hyp_length += hyp.len();
            ref_length += refs.iter().map(|r| r.len()).sum::<usize>() as f64 / refs.len() as f64;
            for n in 1..=max_n {
                let hyp_counts = ngrams(hyp, n);
                let ref_counts: Vec<_> = refs.iter().map(|r| ngrams(r, n)).collect();
                totals[n - 1] += hyp_counts.total();
                // Sorted so the floating-point sum does not depend on hash order.
                let mut grams: Vec<_> = hyp_counts.iter().collect();
                grams.sort_unstable();
                for (gram, count) in grams {
                    let max_ref = ref_counts.iter().map(|r| r.get(gram)).max().unwrap_or(0);
                    let matched = count.min(max_ref);
                    if matched > 0 {
                        let info = self.info(gram).unwrap_or(0.0);
                        info_sums[n - 1] += matched as f64 * info;
                    }
                }
            }
        }
        let per_order: Vec<f64> = info_sums
            .iter()
            .zip(&totals)
            .map(|(s, &t)| if t > 0 { s / t as f64 } else { 0.0 })
            .collect();
        let brevity_factor = self.brevity_factor(hyp_length, ref_length);
        let score = per_order.iter().sum::<f64>() * brevity_factor;
        Ok(NistScore {
            score,
            per_order,
            brevity_factor,
            hyp_length,
            ref_length,
        })
    }
}

/// Corpus NIST with information weights taken from `ref_corpus` itself.
pub fn nist(
    hyp_corpus: &[TokenSequence],
    ref_corpus: &[Vec<TokenSequence>],
    config: &NistConfig,
) -> Result<NistScore> {
    NistScorer::new(ref_corpus, config.clone())?.score(hyp_corpus, ref_corpus)
}
