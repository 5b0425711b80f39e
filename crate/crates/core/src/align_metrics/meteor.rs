use serde::{Deserialize, Serialize};

use super::LanguageResources;
use crate::error::{Error, Result};
use crate::textcore::TokenSequence;

/// Default fragmentation penalty exponent (linear in chunks per match).
pub const DEFAULT_PENALTY_EXPONENT: f64 = 1.0;

/// Search budget per alignment stage before the best matching found so far is kept.
const SEARCH_NODE_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MatchStage {
    Exact,
    Stem,
    Synonym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordMatch {
    pub hyp: usize,
    pub reference: usize,
    pub stage: MatchStage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeteorAlignment {
    /// Sorted by hypothesis index; one-to-one in both sequences.
    pub matches: Vec<WordMatch>,
    pub chunks: usize,
    pub matched_unigrams: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeteorScore {
    pub precision: f64,
    pub recall: f64,
    pub fmean: f64,
    pub penalty: f64,
    pub score: f64,
    pub penalty_exponent: f64,
    pub chunks: usize,
    pub matched_unigrams: usize,
}

fn crossings_with(pairs: &[(usize, usize)], h: usize, r: usize) -> usize {
    pairs
        .iter()
        .filter(|&&(h1, r1)| (h1 < h && r1 > r) || (h1 > h && r1 < r))
        .count()
}

/// Maximum bipartite matching size (Kuhn's augmenting paths).
fn max_matching(candidates: &[Vec<usize>], ref_len: usize) -> usize {
    fn augment(u: usize, candidates: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &candidates[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|o| augment(o, candidates, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; ref_len];
    let mut size = 0;
    for u in 0..candidates.len() {
        let mut seen = vec![false; ref_len];
        if augment(u, candidates, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

struct StageSearch<'a> {
    hyp_ids: &'a [usize],
    candidates: &'a [Vec<usize>],
    target: usize,
    fixed: &'a [(usize, usize)],
    used: Vec<bool>,
    chosen: Vec<(usize, usize)>,
    best: Option<(usize, Vec<(usize, usize)>)>,
    nodes: usize,
}

impl StageSearch<'_> {
    fn run(&mut self, pos: usize, crossings: usize) {
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_LIMIT && self.best.is_some() {
            return;
        }
        if let Some((best, _)) = &self.best {
            if crossings >= *best {
                return;
            }
        }
        if self.chosen.len() == self.target {
            self.best = Some((crossings, self.chosen.clone()));
            return;
        }
        if self.chosen.len() + (self.hyp_ids.len() - pos) < self.target {
            return;
        }
        let h = self.hyp_ids[pos];
        for &r in &self.candidates[pos] {
            if self.used[r] {
                continue;
            }
            let added = crossings_with(self.fixed, h, r) + crossings_with(&self.chosen, h, r);
            self.used[r] = true;
            self.chosen.push((h, r));
            self.run(pos + 1, crossings + added);
            self.chosen.pop();
            self.used[r] = false;
        }
        self.run(pos + 1, crossings);
    }
}

/// Staged one-to-one word alignment: exact, then shared stem, then synonym.
///
/// Each stage only sees words left unmatched by earlier stages. Within a
/// stage the matching has maximum size, and among those the fewest pairs
/// crossing any existing match; remaining ties prefer lower indices.
pub fn meteor_align(
    hyp: &TokenSequence,
    reference: &TokenSequence,
    resources: &LanguageResources,
) -> MeteorAlignment {
    let mut matches: Vec<WordMatch> = Vec::new();
    let mut hyp_used = vec![false; hyp.len()];
    let mut ref_used = vec![false; reference.len()];

    let stages: [(MatchStage, bool); 3] = [
        (MatchStage::Exact, true),
        (MatchStage::Stem, resources.has_stems()),
        (MatchStage::Synonym, resources.has_synonyms()),
    ];
    for (stage, enabled) in stages {
        if !enabled {
            continue;
        }
        let accepts = |a: &str, b: &str| match stage {
            MatchStage::Exact => a == b,
            MatchStage::Stem => resources.share_stem(a, b),
            MatchStage::Synonym => resources.are_synonyms(a, b),
        };
        let mut hyp_ids = Vec::new();
        let mut candidates = Vec::new();
        for (h, word) in hyp.iter().enumerate() {
            if hyp_used[h] {
                continue;
            }
            let c: Vec<usize> = (0..reference.len())
                .filter(|&r| !ref_used[r] && accepts(word, &reference[r]))
                .collect();
            if !c.is_empty() {
                hyp_ids.push(h);
                candidates.push(c);
            }
        }
        if hyp_ids.is_empty() {
            continue;
        }
        let target = max_matching(&candidates, reference.len());
        let fixed: Vec<(usize, usize)> = matches.iter().map(|m| (m.hyp, m.reference)).collect();
        let mut search = StageSearch {
            hyp_ids: &hyp_ids,
            candidates: &candidates,
            target,
            fixed: &fixed,
            used: ref_used.clone(),
            chosen: Vec::new(),
            best: None,
            nodes: 0,
        };
        search.run(0, 0);
        let (_, chosen) = search.best.expect("a maximum matching always exists");
        for (h, r) in chosen {
            hyp_used[h] = true;
            ref_used[r] = true;
            matches.push(WordMatch {
                hyp: h,
                reference: r,
                stage,
            });
        }
    }

    matches.sort_unstable_by_key(|m| m.hyp);
    let chunks = count_chunks(&matches);
    MeteorAlignment {
        matched_unigrams: matches.len(),
        matches,
        chunks,
    }
}

/// Maximal runs of matches contiguous and in order in both sequences.
/// `matches` must be sorted by hypothesis index.
pub fn count_chunks(matches: &[WordMatch]) -> usize {
    if matches.is_empty() {
        return 0;
    }
    1 + matches
        .windows(2)
        .filter(|w| !(w[1].hyp == w[0].hyp + 1 && w[1].reference == w[0].reference + 1))
        .count()
}

fn weighted_share<'a>(
    tokens: impl Iterator<Item = (usize, &'a String)>,
    matched: &[bool],
    resources: &LanguageResources,
) -> f64 {
    let mut total = 0.0;
    let mut hit = 0.0;
    for (i, t) in tokens {
        let w = resources.token_weight(t);
        total += w;
        if matched[i] {
            hit += w;
        }
    }
    if total > 0.0 {
        hit / total
    } else {
        0.0
    }
}

pub fn meteor(
    hyp: &TokenSequence,
    reference: &TokenSequence,
    resources: &LanguageResources,
    penalty_exponent: f64,
) -> Result<MeteorScore> {
    if !(penalty_exponent.is_finite() && penalty_exponent >= 0.0) {
        return Err(Error::InvalidConfig(
            "METEOR penalty exponent must be >= 0".into(),
        ));
    }
    let alignment = meteor_align(hyp, reference, resources);
    let mut hyp_matched = vec![false; hyp.len()];
    let mut ref_matched = vec![false; reference.len()];
    for m in &alignment.matches {
        hyp_matched[m.hyp] = true;
        ref_matched[m.reference] = true;
    }
    let precision = weighted_share(hyp.iter().enumerate(), &hyp_matched, resources);
    let recall = weighted_share(reference.iter().enumerate(), &ref_matched, resources);
    let mu = alignment.matched_unigrams;
    let (fmean, penalty) = if mu == 0 || precision == 0.0 || recall == 0.0 {
        (0.0, 0.0)
    } else {
        let fmean = 10.0 * precision * recall / (recall + 9.0 * precision);
        let penalty = 0.5 * (alignment.chunks as f64 / mu as f64).powf(penalty_exponent);
        (fmean, penalty)
    };
    Ok(MeteorScore {
        precision,
        recall,
        fmean,
        penalty,
        score: fmean * (1.0 - penalty),
        penalty_exponent,
        chunks: alignment.chunks,
        matched_unigrams: mu,
    })
}

/// METEOR driven by a loaded language bundle (stems, synonyms, function words).
pub fn meteor_pl(
    hyp: &TokenSequence,
    reference: &TokenSequence,
    resources: &LanguageResources,
    penalty_exponent: f64,
) -> Result<MeteorScore> {
    if resources.is_empty() {
        return Err(Error::MissingResources);
    }
    meteor(hyp, reference, resources, penalty_exponent)
}

/// Best METEOR over several references.
pub fn meteor_multi(
    hyp: &TokenSequence,
    refs: &[TokenSequence],
    resources: &LanguageResources,
    penalty_exponent: f64,
) -> Result<MeteorScore> {
    let mut best: Option<MeteorScore> = None;
    for r in refs {
        let s = meteor(hyp, r, resources, penalty_exponent)?;
        if best.as_ref().is_none_or(|b| s.score > b.score) {
            best = Some(s);
        }
    }
    best.ok_or(Error::EmptyReference)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> TokenSequence {
        TokenSequence::from_whitespace(s)
    }

    fn none() -> LanguageResources {
        LanguageResources::default()
    }

    #[test]
    fn identity_is_one_chunk() {
        let s = seq("a b a c b");
        let a = meteor_align(&s, &s, &none());
        assert_eq!(a.matched_unigrams, 5);
        assert_eq!(a.chunks, 1);
        assert!(a
            .matches
            .iter()
            .all(|m| m.hyp == m.reference && m.stage == MatchStage::Exact));
    }

    #[test]
    fn swapped_pair_is_two_chunks() {
        let a = meteor_align(&seq("a b"), &seq("b a"), &none());
        assert_eq!(a.matched_unigrams, 2);
        assert_eq!(a.chunks, 2);
    }

    #[test]
    fn stem_stage_matches() {
        let res = none()
            .with_stems("dogs\tdog\ndog\tdog\nrun\trun\nruns\trun\n")
            .unwrap();
        let a = meteor_align(&seq("dogs run"), &seq("dog runs"), &res);
        assert_eq!(a.matched_unigrams, 2);
        assert_eq!(a.chunks, 1);
        assert!(a.matches.iter().all(|m| m.stage == MatchStage::Stem));
    }

    #[test]
    fn repeated_words_choose_fewest_crossings() {
        // the second "the" should pair with the second reference "the"
        let a = meteor_align(&seq("the cat the dog"), &seq("the cat the dog"), &none());
        assert_eq!(a.chunks, 1);
        let a = meteor_align(&seq("x the cat"), &seq("the dog the cat"), &none());
        let pairs: Vec<_> = a.matches.iter().map(|m| (m.hyp, m.reference)).collect();
        assert_eq!(pairs, vec![(1, 0), (2, 3)]);
    }

    #[test]
    fn identity_formula() {
        let s = seq("w x y z");
        let m = meteor(&s, &s, &none(), 1.0).unwrap();
        assert_eq!((m.precision, m.recall, m.fmean), (1.0, 1.0, 1.0));
        assert!((m.penalty - 0.125).abs() < 1e-15);
        assert!((m.score - 0.875).abs() < 1e-15);
    }

    #[test]
    fn disjoint_scores_zero() {
        let m = meteor(&seq("a b"), &seq("c d"), &none(), 1.0).unwrap();
        assert_eq!(m.score, 0.0);
        assert_eq!(m.matched_unigrams, 0);
    }

    #[test]
    fn hand_evaluated_instance() {
        let m = meteor(&seq("a b c d"), &seq("a b x d"), &none(), 1.0).unwrap();
        assert_eq!(m.matched_unigrams, 3);
        assert_eq!(m.chunks, 2);
        assert_eq!(m.precision, 0.75);
        assert!((m.fmean - 0.75).abs() < 1e-15);
        assert!((m.penalty - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.score - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cubic_penalty_exponent() {
        let m = meteor(&seq("a b c d"), &seq("a b x d"), &none(), 3.0).unwrap();
        assert!((m.penalty - 0.5 * (2.0f64 / 3.0).powi(3)).abs() < 1e-15);
    }

    #[test]
    fn function_words_are_down_weighted() {
        let res = none().with_function_words("i\n").unwrap();
        // hyp misses the function word only
        let m = meteor(&seq("kot pies"), &seq("kot i pies"), &res, 1.0).unwrap();
        assert_eq!(m.precision, 1.0);
        assert!((m.recall - 2.0 / 2.2).abs() < 1e-12);
    }

    #[test]
    fn pl_variant_requires_resources() {
        let s = seq("a b");
        assert_eq!(meteor_pl(&s, &s, &none(), 1.0), Err(Error::MissingResources));
        let res = none().with_synonyms("a\tb").unwrap();
        assert_eq!(
            meteor_pl(&s, &s, &res, 1.0).unwrap().score,
            meteor(&s, &s, &none(), 1.0).unwrap().score
        );
    }

    #[test]
    fn synonyms_raise_score() {
        let h = seq("this is a exam");
        let r = seq("this is a quiz");
        let res = none().with_synonyms("exam\tquiz").unwrap();
        let plain = meteor(&h, &r, &none(), 1.0).unwrap().score;
        let with = meteor_pl(&h, &r, &res, 1.0).unwrap().score;
        assert!(with > plain);
    }

    #[test]
    fn multi_stem_word_matches_once() {
        let res = none().with_stems("zamku\tzamek zamka\n").unwrap();
        let a = meteor_align(&seq("zamku"), &seq("zamek zamka"), &res);
        assert_eq!(a.matched_unigrams, 1);
    }
}
