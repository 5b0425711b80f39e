//! Scoring toolkit for re-speaking and live-subtitle transcripts.
//!
//! The crate bundles seven automatic metrics computed between a hypothesis
//! transcript and one or more reference transcripts:
//!
//! * n-gram metrics: [`bleu`](ngram_metrics::bleu), [`nist`](ngram_metrics::nist)
//!   and the synonym/rare-word aware [`ebleu`](ngram_metrics::ebleu);
//! * alignment metrics: [`ter`](align_metrics::ter), [`meteor`](align_metrics::meteor),
//!   the resource-driven [`meteor_pl`](align_metrics::meteor_pl) and
//!   [`ribes`](align_metrics::ribes);
//!
//! plus the human-annotation NER accuracy model ([`ner`]) and an OLS /
//! backward-elimination toolkit ([`stats`]) used to predict NER accuracy
//! from the automatic scores.
//!
//! ```
//! use respeak_core::textcore::{tokenize, TokenizerConfig};
//! use respeak_core::ngram_metrics::{bleu, BleuConfig};
//!
//! let cfg = TokenizerConfig::default();
//! let hyp = vec![tokenize("this is a exam", &cfg)];
//! let refs = vec![vec![tokenize("this is a quiz", &cfg)]];
//! let score = bleu(&hyp, &refs, &BleuConfig::new(1).unwrap()).unwrap();
//! assert!((score.score - 0.75).abs() < 1e-12);
//! ```

pub mod align_metrics;
pub mod error;
pub mod fixtures;
pub mod ner;
pub mod ngram_metrics;
pub mod stats;
pub mod textcore;

pub use align_metrics::{LanguageResources, MeteorScore, RibesScore, RibesVariant, TerScore};
pub use error::{Error, Result};
pub use ner::{EditionErrors, ErrorSeverity, NerRecord};
pub use ngram_metrics::{BleuConfig, BleuScore, EbleuConfig, EbleuScore, NistConfig};
pub use stats::{DataTable, EliminationTrace, LinearEquation, RegressionModel};
pub use textcore::{TokenSequence, TokenizerConfig};
