use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rank::{kendall_nkt, spearman_nsr};
use crate::error::{Error, Result};
use crate::textcore::TokenSequence;

pub const DEFAULT_ALPHA: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RibesVariant {
    #[default]
    Nkt,
    Nsr,
}

impl FromStr for RibesVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nkt" => Ok(RibesVariant::Nkt),
            "nsr" => Ok(RibesVariant::Nsr),
            other => Err(Error::InvalidConfig(format!("unknown RIBES variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RibesScore {
    pub nkt: f64,
    pub nsr: f64,
    /// Share of hypothesis words that were aligned.
    pub precision: f64,
    pub alpha: f64,
    pub variant: RibesVariant,
    pub score: f64,
    /// Reference positions of the aligned words, in hypothesis order.
    pub alignment: Vec<usize>,
}

fn occurrences(seq: &[String], gram: &[String]) -> Vec<usize> {
    if gram.len() > seq.len() {
        return Vec::new();
    }
    seq.windows(gram.len())
        .enumerate()
        .filter(|(_, w)| *w == gram)
        .map(|(i, _)| i)
        .collect()
}

/// Reference position of each hypothesis word that can be aligned without
/// ambiguity, in hypothesis order.
///
/// A word occurring exactly once on both sides aligns directly. Otherwise
/// it is widened into ever longer windows (right context first, then left,
/// then centred) until one window occurs exactly once on both sides; words
/// that never become unique stay unaligned. Each reference position is used
/// at most once.
pub fn ribes_alignment(hyp: &TokenSequence, reference: &TokenSequence) -> Vec<usize> {
    let mut taken = vec![false; reference.len()];
    let mut aligned = Vec::new();
    let longest = hyp.len().max(reference.len());
    for (i, word) in hyp.iter().enumerate() {
        let unigram = std::slice::from_ref(word);
        let in_ref = occurrences(reference, unigram);
        if in_ref.is_empty() {
            continue;
        }
        let mut found = None;
        if in_ref.len() == 1 && occurrences(hyp, unigram).len() == 1 {
            found = Some(in_ref[0]);
        } else {
            'grow: for k in 1..longest {
                // windows of k + 1 words holding word i: right context, left
                // context, then the centred ones
                let offsets = std::iter::once(0).chain(std::iter::once(k)).chain(1..k);
                for offset in offsets {
                    if offset > i || i - offset + k >= hyp.len() {
                        continue;
                    }
                    let start = i - offset;
                    let gram = &hyp[start..=start + k];
                    let r = occurrences(reference, gram);
                    if r.len() == 1 && occurrences(hyp, gram).len() == 1 {
                        found = Some(r[0] + offset);
                        break 'grow;
                    }
                }
            }
        }
        if let Some(pos) = found {
            if !taken[pos] {
                taken[pos] = true;
                aligned.push(pos);
            }
        }
    }
    aligned
}

/// Word-order score: rank correlation of the aligned positions times
/// `precision^alpha`. Fewer than two aligned words score 0.
pub fn ribes(
    hyp: &TokenSequence,
    reference: &TokenSequence,
    alpha: f64,
    variant: RibesVariant,
) -> Result<RibesScore> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "RIBES alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let alignment = ribes_alignment(hyp, reference);
    let precision = if hyp.is_empty() {
        0.0
    } else {
        alignment.len() as f64 / hyp.len() as f64
    };
    let (nkt, nsr) = if alignment.len() < 2 {
        (0.0, 0.0)
    } else {
        (kendall_nkt(&alignment)?, spearman_nsr(&alignment)?)
    };
    let statistic = match variant {
        RibesVariant::Nkt => nkt,
        RibesVariant::Nsr => nsr,
    };
    Ok(RibesScore {
        nkt,
        nsr,
        precision,
        alpha,
        variant,
        score: statistic * precision.powf(alpha),
        alignment,
    })
}

/// Best RIBES over several references.
pub fn ribes_multi(
    hyp: &TokenSequence,
    refs: &[TokenSequence],
    alpha: f64,
    variant: RibesVariant,
) -> Result<RibesScore> {
    let mut best: Option<RibesScore> = None;
    for r in refs {
        let s = ribes(hyp, r, alpha, variant)?;
        if best.as_ref().is_none_or(|b| s.score > b.score) {
            best = Some(s);
        }
    }
    best.ok_or(Error::EmptyReference)
}
