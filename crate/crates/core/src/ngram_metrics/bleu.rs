use serde::{Deserialize, Serialize};

use super::validate_corpus;
use crate::error::{Error, Result};
use crate::textcore::{clipped_matches, ngrams, NGramCounts, TokenSequence};

/// How zero n-gram precisions are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Smoothing {
    /// A zero precision at a weighted order zeroes the whole score.
    #[default]
    None,
    /// Add one to matches and totals at every order n >= 2.
    AddOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub max_n: usize,
    pub weights: Vec<f64>,
    pub smoothing: Smoothing,
    /// Average per-segment scores instead of pooling n-gram statistics.
    pub sentence_level: bool,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig::new(4).expect("order 4 is valid")
    }
}

impl BleuConfig {
    /// Uniform weights `1/max_n`.
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n == 0 {
            return Err(Error::InvalidConfig("max_n must be at least 1".into()));
        }
        Ok(BleuConfig {
            max_n,
            weights: vec![1.0 / max_n as f64; max_n],
            smoothing: Smoothing::None,
            sentence_level: false,
        })
    }

    pub fn with_weights(weights: Vec<f64>) -> Result<Self> {
        let config = BleuConfig {
            max_n: weights.len(),
            weights,
            smoothing: Smoothing::None,
            sentence_level: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_n == 0 {
            return Err(Error::InvalidConfig("max_n must be at least 1".into()));
        }
        if self.weights.len() != self.max_n {
            return Err(Error::InvalidConfig(format!(
                "expected {} weights, got {}",
                self.max_n,
                self.weights.len()
            )));
        }
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig("weights must be non-negative".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!("weights sum to {sum}, not 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuScore {
    pub score: f64,
    pub brevity_penalty: f64,
    /// Per-order precision; `None` where no hypothesis reaches that length.
    pub precisions: Vec<Option<f64>>,
    pub hyp_length: usize,
    pub ref_length: usize,
}

/// `1` when the hypothesis is longer than the reference, `e^(1 - r/c)` otherwise.
pub fn brevity_penalty(hyp_len: usize, ref_len: usize) -> Result<f64> {
    if hyp_len == 0 {
        return if ref_len == 0 {
            Ok(1.0)
        } else {
            Err(Error::EmptyHypothesis)
        };
    }
    if hyp_len > ref_len {
        Ok(1.0)
    } else {
        Ok((1.0 - ref_len as f64 / hyp_len as f64).exp())
    }
}

/// Length of the reference closest to `hyp_len`; ties go to the shorter one.
pub fn closest_ref_length(hyp_len: usize, refs: &[TokenSequence]) -> usize {
    refs.iter()
        .map(|r| r.len())
        .min_by_key(|&len| (len.abs_diff(hyp_len), len))
        .unwrap_or(0)
}

/// Clipped n-gram precision, or `None` when the hypothesis is shorter than `n`.
pub fn modified_precision(hyp: &TokenSequence, refs: &[TokenSequence], n: usize) -> Option<f64> {
    let (matches, total) = match_counts(hyp, refs, n);
    (total > 0).then(|| matches as f64 / total as f64)
}

pub(crate) fn match_counts(hyp: &TokenSequence, refs: &[TokenSequence], n: usize) -> (usize, usize) {
    let hyp_counts = ngrams(hyp, n);
    let ref_counts: Vec<NGramCounts<'_>> = refs.iter().map(|r| ngrams(r, n)).collect();
    (clipped_matches(&hyp_counts, &ref_counts), hyp_counts.total())
}

/// Weighted geometric mean over the defined orders. Orders the hypothesis
/// never reaches are dropped and the remaining weights renormalized.
pub(crate) fn combine_precisions(precisions: &[Option<f64>], weights: &[f64]) -> f64 {
    let weight_sum: f64 = precisions
        .iter()
        .zip(weights)
        .filter(|(p, _)| p.is_some())
        .map(|(_, w)| *w)
        .sum();
    if weight_sum <= 0.0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for (p, &w) in precisions.iter().zip(weights) {
        let Some(p) = *p else { continue };
        if w == 0.0 {
            continue;
        }
        if p <= 0.0 {
            return 0.0;
        }
        log_sum += (w / weight_sum) * p.ln();
    }
    log_sum.exp()
}

fn smoothed(matches: usize, total: usize, n: usize, smoothing: Smoothing) -> Option<f64> {
    if total == 0 {
        return None;
    }
    match smoothing {
        Smoothing::AddOne if n >= 2 => Some((matches + 1) as f64 / (total + 1) as f64),
        _ => Some(matches as f64 / total as f64),
    }
}

fn pooled(hyps: &[TokenSequence], refs: &[Vec<TokenSequence>], config: &BleuConfig) -> Result<BleuScore> {
    let mut matches = vec![0usize; config.max_n];
    let mut totals = vec![0usize; config.max_n];
    let mut hyp_length = 0;
    let mut ref_length = 0;
    for (hyp, seg_refs) in hyps.iter().zip(refs) {
        hyp_length += hyp.len();
        ref_length += closest_ref_length(hyp.len(), seg_refs);
        for n in 1..=config.max_n {
            let (m, t) = match_counts(hyp, seg_refs, n);
            matches[n - 1] += m;
            totals[n - 1] += t;
        }
    }
    let brevity_penalty = brevity_penalty(hyp_length, ref_length)?;
    let precisions: Vec<Option<f64>> = (1..=config.max_n)
        .map(|n| smoothed(matches[n - 1], totals[n - 1], n, config.smoothing))
        .collect();
    let score = brevity_penalty * combine_precisions(&precisions, &config.weights);
    Ok(BleuScore {
        score,
        brevity_penalty,
        precisions,
        hyp_length,
        ref_length,
    })
}

/// Corpus BLEU. With `sentence_level` set, `score` is the mean of the
/// per-segment scores while the other fields still describe the pooled corpus.
pub fn bleu(
    hyp_corpus: &[TokenSequence],
    ref_corpus: &[Vec<TokenSequence>],
    config: &BleuConfig,
) -> Result<BleuScore> {
    config.validate()?;
    validate_corpus(hyp_corpus, ref_corpus)?;
    let mut result = pooled(hyp_corpus, ref_corpus, config)?;
    if config.sentence_level {
        let mut sum = 0.0;
        for (hyp, seg_refs) in hyp_corpus.iter().zip(ref_corpus) {
            sum += match pooled(std::slice::from_ref(hyp), std::slice::from_ref(seg_refs), config) {
                Ok(s) => s.score,
                Err(Error::EmptyHypothesis) => 0.0,
                Err(e) => return Err(e),
            };
        }
        result.score = sum / hyp_corpus.len() as f64;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> TokenSequence {
        TokenSequence::from_whitespace(s)
    }

    fn single(h: &str, r: &str) -> (Vec<TokenSequence>, Vec<Vec<TokenSequence>>) {
        (vec![seq(h)], vec![vec![seq(r)]])
    }

    #[test]
    fn brevity_penalty_examples() {
        assert_eq!(brevity_penalty(10, 5).unwrap(), 1.0);
        assert_eq!(brevity_penalty(5, 5).unwrap(), 1.0);
        assert!((brevity_penalty(5, 10).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((brevity_penalty(5, 10).unwrap() - 0.367879).abs() < 1e-6);
        assert_eq!(brevity_penalty(0, 3), Err(Error::EmptyHypothesis));
    }

    #[test]
    fn modified_precision_examples() {
        let p = modified_precision(&seq("this is a exam"), &[seq("this is a quiz")], 1).unwrap();
        assert_eq!(p, 0.75);
        let s = seq("one two three four five");
        for n in 1..=5 {
            assert_eq!(modified_precision(&s, std::slice::from_ref(&s), n), Some(1.0));
        }
        assert_eq!(modified_precision(&seq("x y"), &[seq("a b")], 1), Some(0.0));
        assert_eq!(modified_precision(&seq("x y"), &[seq("x y")], 3), None);
    }

    #[test]
    fn bleu_examples() {
        let (h, r) = single("the cat sat on the mat", "the cat sat on the mat");
        let s = bleu(&h, &r, &BleuConfig::default()).unwrap();
        assert_eq!(s.score, 1.0);
        assert_eq!(s.brevity_penalty, 1.0);

        let (h, r) = single("this is a exam", "this is a quiz");
        let s = bleu(&h, &r, &BleuConfig::with_weights(vec![1.0]).unwrap()).unwrap();
        assert!((s.score - 0.75).abs() < 1e-12);

        // no matching 4-gram
        let (h, r) = single("a b c d e", "a b c x d e");
        let s = bleu(&h, &r, &BleuConfig::default()).unwrap();
        assert_eq!(s.precisions[3], Some(0.0));
        assert_eq!(s.score, 0.0);
    }

    #[test]
    fn add_one_smoothing_rescues_zero_orders() {
        let (h, r) = single("a b c d e", "a b c x d e");
        let cfg = BleuConfig {
            smoothing: Smoothing::AddOne,
            ..BleuConfig::default()
        };
        let s = bleu(&h, &r, &cfg).unwrap();
        assert_eq!(s.precisions[3], Some(1.0 / 3.0));
        assert!(s.score > 0.0);
    }

    #[test]
    fn short_hypothesis_drops_undefined_orders() {
        let (h, r) = single("a b", "a b");
        let s = bleu(&h, &r, &BleuConfig::default()).unwrap();
        assert_eq!(s.precisions, vec![Some(1.0), Some(1.0), None, None]);
        assert_eq!(s.score, 1.0);
    }

    #[test]
    fn closest_reference_breaks_ties_short() {
        let refs = vec![seq("a b c d e f"), seq("a b")];
        assert_eq!(closest_ref_length(4, &refs), 2);
        assert_eq!(closest_ref_length(5, &refs), 6);
    }

    #[test]
    fn sentence_level_averages_segments() {
        let h = vec![seq("a b c d"), seq("w x y z")];
        let r = vec![vec![seq("a b c d")], vec![seq("q r s t")]];
        let cfg = BleuConfig {
            sentence_level: true,
            ..BleuConfig::default()
        };
        assert_eq!(bleu(&h, &r, &cfg).unwrap().score, 0.5);
    }

    #[test]
    fn config_validation() {
        assert!(BleuConfig::with_weights(vec![0.5, 0.4]).is_err());
        assert!(BleuConfig::with_weights(vec![1.5, -0.5]).is_err());
        assert!(BleuConfig::new(0).is_err());
    }

    #[test]
    fn corpus_errors() {
        let h = vec![seq("a")];
        assert_eq!(
            bleu(&h, &[], &BleuConfig::default()),
            Err(Error::LengthMismatch { hyp: 1, reference: 0 })
        );
        assert_eq!(bleu(&[], &[], &BleuConfig::default()), Err(Error::EmptyCorpus));
    }
}
