use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textcore::TokenSequence;

/// Longest block a single shift may move.
pub const MAX_SHIFT_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerScore {
    /// Insertions, deletions, substitutions and shifts, unit cost each.
    pub edits: f64,
    pub shifts: usize,
    pub ref_length: usize,
    pub ter: f64,
}

/// Unit-cost Levenshtein distance between two token sequences.
pub fn word_edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Per reference position: the hypothesis index it lines up with in one
/// minimal edit alignment, and whether that pair is an exact match.
fn align(hyp: &[u32], reference: &[u32]) -> Vec<(usize, bool)> {
    let (h, r) = (hyp.len(), reference.len());
    let mut dp = vec![vec![0usize; r + 1]; h + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in dp[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=h {
        for j in 1..=r {
            let sub = dp[i - 1][j - 1] + usize::from(hyp[i - 1] != reference[j - 1]);
            dp[i][j] = sub.min(dp[i - 1][j] + 1).min(dp[i][j - 1] + 1);
        }
    }
    let mut out = vec![(0, false); r];
    let (mut i, mut j) = (h, r);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let same = hyp[i - 1] == reference[j - 1];
            if dp[i][j] == dp[i - 1][j - 1] + usize::from(!same) {
                out[j - 1] = (i - 1, same);
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && dp[i][j] == dp[i - 1][j] + 1 {
            i -= 1;
        } else {
            out[j - 1] = (i, false);
            j -= 1;
        }
    }
    out
}

fn apply_shift(seq: &[u32], start: usize, len: usize, dest: usize) -> Vec<u32> {
    let mut rest: Vec<u32> = Vec::with_capacity(seq.len());
    rest.extend_from_slice(&seq[..start]);
    rest.extend_from_slice(&seq[start + len..]);
    let mut out = Vec::with_capacity(seq.len());
    out.extend_from_slice(&rest[..dest]);
    out.extend_from_slice(&seq[start..start + len]);
    out.extend_from_slice(&rest[dest..]);
    out
}

/// Best single shift: `(new distance, start, len, dest)`.
fn best_shift(hyp: &[u32], reference: &[u32], current: usize) -> Option<(usize, usize, usize, usize)> {
    let alignment = align(hyp, reference);
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for start in 0..hyp.len() {
        for len in 1..=MAX_SHIFT_LEN.min(hyp.len() - start) {
            let block = &hyp[start..start + len];
            for j in 0..reference.len().saturating_sub(len - 1) {
                if &reference[j..j + len] != block {
                    continue;
                }
                let already_aligned = (0..len).all(|k| alignment[j + k] == (start + k, true));
                if already_aligned {
                    continue;
                }
                let target = alignment[j].0;
                let anchor = if target >= start + len {
                    target - len
                } else if target <= start {
                    target
                } else {
                    continue;
                };
                let lo = anchor.saturating_sub(1);
                let hi = (anchor + 1).min(hyp.len() - len);
                for dest in lo..=hi {
                    if dest == start {
                        continue;
                    }
                    let shifted = apply_shift(hyp, start, len, dest);
                    let dist = word_edit_distance(&shifted, reference);
                    if dist + 1 >= current {
                        continue;
                    }
                    let candidate = (dist, start, len, dest);
                    let better = match best {
                        None => true,
                        Some((bd, bs, bl, bdst)) => {
                            (dist, std::cmp::Reverse(len), start, dest)
                                < (bd, std::cmp::Reverse(bl), bs, bdst)
                        }
                    };
                    if better {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    best
}

fn intern<'a>(vocab: &mut HashMap<&'a str, u32>, seq: &'a [String]) -> Vec<u32> {
    seq.iter()
        .map(|t| {
            let next = vocab.len() as u32;
            *vocab.entry(t.as_str()).or_insert(next)
        })
        .collect()
}

/// Edit count after greedily applying block shifts: each round takes the
/// shift that lowers the word edit distance the most (a shift costs one
/// edit, so it must lower the distance by at least two), then the residual
/// distance is added.
pub fn shift_edits(hyp: &[String], reference: &[String]) -> (usize, usize) {
    let mut vocab = HashMap::new();
    let mut h = intern(&mut vocab, hyp);
    let r = intern(&mut vocab, reference);
    let mut current = word_edit_distance(&h, &r);
    let mut shifts = 0;
    while current > 0 {
        match best_shift(&h, &r, current) {
            Some((dist, start, len, dest)) => {
                h = apply_shift(&h, start, len, dest);
                current = dist;
                shifts += 1;
            }
            None => break,
        }
    }
    (shifts + current, shifts)
}

pub fn ter(hyp: &TokenSequence, reference: &TokenSequence) -> Result<TerScore> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    let (edits, shifts) = shift_edits(hyp, reference);
    Ok(TerScore {
        edits: edits as f64,
        shifts,
        ref_length: reference.len(),
        ter: edits as f64 / reference.len() as f64,
    })
}

/// TER against the closest of several references (lowest rate).
pub fn ter_multi(hyp: &TokenSequence, refs: &[TokenSequence]) -> Result<TerScore> {
    let mut best: Option<TerScore> = None;
    for r in refs {
        let s = ter(hyp, r)?;
        if best.as_ref().is_none_or(|b| s.ter < b.ter) {
            best = Some(s);
        }
    }
    best.ok_or(Error::EmptyReference)
}
