//! N-gram overlap metrics: BLEU, NIST and EBLEU.
//!
//! All three share the same corpus shape: one hypothesis per segment and a
//! non-empty list of references per segment. Scores are raw values (BLEU and
//! EBLEU in `[0, 1]`, NIST unbounded above); reports scale them.

mod bleu;
mod ebleu;
mod nist;

pub use bleu::{
    bleu, brevity_penalty, closest_ref_length, modified_precision, BleuConfig, BleuScore, Smoothing,
};
pub use ebleu::{
    ebleu, rare_words, synonym_expand, AnnotatedToken, EbleuConfig, EbleuScore, EbleuScorer, MatchKind,
};
pub use nist::{default_brevity_beta, nist, NistConfig, NistScore, NistScorer};

use crate::error::{Error, Result};
use crate::textcore::TokenSequence;

pub(crate) fn validate_corpus(hyp_corpus: &[TokenSequence], ref_corpus: &[Vec<TokenSequence>]) -> Result<()> {
    if hyp_corpus.len() != ref_corpus.len() {
        return Err(Error::LengthMismatch {
            hyp: hyp_corpus.len(),
            reference: ref_corpus.len(),
        });
    }
    if hyp_corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if ref_corpus.iter().any(Vec::is_empty) {
        return Err(Error::EmptyReference);
    }
    Ok(())
}
