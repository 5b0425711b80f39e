mod common;

use proptest::prelude::*;
use respeak_core::align_metrics::{
    kendall_nkt, meteor, ribes, shift_edits, spearman_nsr, ter, word_edit_distance, RibesVariant,
};
use respeak_core::ner::{ner_accuracy, EditionErrors, NerRecord};
use respeak_core::ngram_metrics::{bleu, ebleu, nist, BleuConfig, EbleuConfig, NistConfig};
use respeak_core::textcore::{clipped_matches, ngrams, tokenize};
use respeak_core::{LanguageResources, TokenSequence, TokenizerConfig};

use common::{exhaustive_ter_edits, permutations};

fn to_seq(ids: &[u8]) -> TokenSequence {
    ids.iter().map(|i| format!("w{i}")).collect()
}

fn relabel(ids: &[u8], perm: &[u8]) -> TokenSequence {
    ids.iter().map(|&i| format!("z{}", perm[i as usize])).collect()
}

fn sentence(vocab: u8, max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..vocab, 1..=max)
}

type RawCorpus = Vec<(Vec<u8>, Vec<Vec<u8>>)>;

fn corpus() -> impl Strategy<Value = RawCorpus> {
    prop::collection::vec(
        (sentence(8, 15), prop::collection::vec(sentence(8, 15), 1..=3)),
        1..=20,
    )
}

fn split(raw: &RawCorpus) -> (Vec<TokenSequence>, Vec<Vec<TokenSequence>>) {
    let hyps = raw.iter().map(|(h, _)| to_seq(h)).collect();
    let refs = raw
        .iter()
        .map(|(_, rs)| rs.iter().map(|r| to_seq(r)).collect())
        .collect();
    (hyps, refs)
}

fn synonym_bundle(pairs: &[(u8, u8)]) -> LanguageResources {
    let text: String = pairs
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("w{a}\tw{b}\n"))
        .collect();
    LanguageResources::default().with_synonyms(&text).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tokenize_is_idempotent(text in "[a-zA-ZąćęłńóśźżĄĆĘŁŃÓŚŹŻ0-9 ,.;:!?'()\"-]{0,60}",
                              lowercase: bool, split_punct: bool, strip: bool) {
        let config = TokenizerConfig::new(lowercase, split_punct && !strip, strip).unwrap();
        let once = tokenize(&text, &config);
        let twice = tokenize(&once.to_string(), &config);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn ngram_totals(ids in prop::collection::vec(0u8..6, 0..=30), n in 1usize..=5) {
        let s = to_seq(&ids);
        let counts = ngrams(&s, n);
        prop_assert_eq!(counts.total(), (ids.len() + 1).saturating_sub(n));
        prop_assert_eq!(clipped_matches(&counts, &[ngrams(&s, n)]), counts.total());
    }

    #[test]
    fn ngram_scores_bounded(raw in corpus(), pairs in prop::collection::vec((0u8..8, 0u8..8), 0..6)) {
        let (hyps, refs) = split(&raw);
        let b = bleu(&hyps, &refs, &BleuConfig::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&b.score));
        let res = synonym_bundle(&pairs);
        let e = ebleu(&hyps, &refs, &EbleuConfig::default(), &res).unwrap();
        prop_assert!((0.0..=1.0).contains(&e.score));
        prop_assert!(e.score >= b.score - 1e-12, "EBLEU {} < BLEU {}", e.score, b.score);
        let plain = ebleu(&hyps, &refs, &EbleuConfig::default(), &LanguageResources::default()).unwrap();
        prop_assert!(plain.score >= b.score - 1e-12);
        let n = nist(&hyps, &refs, &NistConfig::default()).unwrap();
        prop_assert!(n.score >= 0.0);
    }

    #[test]
    fn self_scores_are_one(raw in corpus()) {
        let (hyps, _) = split(&raw);
        let refs: Vec<Vec<TokenSequence>> = hyps.iter().map(|h| vec![h.clone()]).collect();
        prop_assert_eq!(bleu(&hyps, &refs, &BleuConfig::default()).unwrap().score, 1.0);
        let e = ebleu(&hyps, &refs, &EbleuConfig::default(), &LanguageResources::default()).unwrap();
        prop_assert!((e.score - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ebleu_cumulative_is_geometric_mean(raw in corpus()) {
        let (hyps, refs) = split(&raw);
        let e = ebleu(&hyps, &refs, &EbleuConfig::default(), &LanguageResources::default()).unwrap();
        if let (Some(c1), Some(b1)) = (e.cumulative[0], e.per_order_base[0]) {
            prop_assert!((c1 - b1).abs() <= 1e-12);
        }
        let mut product = 1.0;
        let mut seen = 0;
        for (base, cum) in e.per_order_base.iter().zip(&e.cumulative) {
            if let (Some(b), Some(c)) = (base, cum) {
                product *= b;
                seen += 1;
                prop_assert!((c - product.powf(1.0 / seen as f64)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn relabeling_invariance(raw in corpus(), perm in Just((0u8..8).collect::<Vec<_>>()).prop_shuffle()) {
        let (hyps, refs) = split(&raw);
        let hyps2: Vec<TokenSequence> = raw.iter().map(|(h, _)| relabel(h, &perm)).collect();
        let refs2: Vec<Vec<TokenSequence>> = raw
            .iter()
            .map(|(_, rs)| rs.iter().map(|r| relabel(r, &perm)).collect())
            .collect();
        let b1 = bleu(&hyps, &refs, &BleuConfig::default()).unwrap().score;
        let b2 = bleu(&hyps2, &refs2, &BleuConfig::default()).unwrap().score;
        prop_assert_eq!(b1, b2);
        let n1 = nist(&hyps, &refs, &NistConfig::default()).unwrap().score;
        let n2 = nist(&hyps2, &refs2, &NistConfig::default()).unwrap().score;
        prop_assert!((n1 - n2).abs() <= 1e-12);
        for ((h, rs), (h2, rs2)) in hyps.iter().zip(&refs).zip(hyps2.iter().zip(&refs2)) {
            prop_assert_eq!(ter(h, &rs[0]).unwrap(), ter(h2, &rs2[0]).unwrap());
            let empty = LanguageResources::default();
            prop_assert_eq!(meteor(h, &rs[0], &empty, 1.0).unwrap(), meteor(h2, &rs2[0], &empty, 1.0).unwrap());
            let r1 = ribes(h, &rs[0], 0.25, RibesVariant::Nkt).unwrap();
            let r2 = ribes(h2, &rs2[0], 0.25, RibesVariant::Nkt).unwrap();
            prop_assert_eq!(r1.score, r2.score);
        }
    }

    #[test]
    fn nist_doubling_invariance(raw in corpus()) {
        let (hyps, refs) = split(&raw);
        let hyps2: Vec<TokenSequence> = hyps.iter().chain(&hyps).cloned().collect();
        let refs2: Vec<Vec<TokenSequence>> = refs.iter().chain(&refs).cloned().collect();
        let a = nist(&hyps, &refs, &NistConfig::default()).unwrap().score;
        let b = nist(&hyps2, &refs2, &NistConfig::default()).unwrap().score;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn ter_shifts_never_hurt(h in sentence(4, 10), r in sentence(4, 10)) {
        let (hs, rs) = (to_seq(&h), to_seq(&r));
        let t = ter(&hs, &rs).unwrap();
        prop_assert!(t.edits <= word_edit_distance(&h, &r) as f64);
        prop_assert_eq!(ter(&hs, &hs).unwrap().ter, 0.0);
        prop_assert_eq!(t.ter == 0.0, hs == rs);
    }

    #[test]
    fn ter_not_below_exhaustive(h in sentence(3, 7), r in sentence(3, 7)) {
        let (edits, _) = shift_edits(&to_seq(&h), &to_seq(&r));
        prop_assert!(edits >= exhaustive_ter_edits(&h, &r));
    }

    #[test]
    fn meteor_bounds_and_synonym_growth(h in sentence(6, 12), r in sentence(6, 12),
                                        pairs in prop::collection::vec((0u8..6, 0u8..6), 0..4),
                                        extra in (0u8..6, 0u8..6)) {
        let (hs, rs) = (to_seq(&h), to_seq(&r));
        let small = synonym_bundle(&pairs);
        let mut grown = pairs.clone();
        grown.push(extra);
        let large = synonym_bundle(&grown);
        for exp in [1.0, 3.0] {
            let a = meteor(&hs, &rs, &small, exp).unwrap();
            let b = meteor(&hs, &rs, &large, exp).unwrap();
            prop_assert!((0.0..=1.0).contains(&a.score));
            prop_assert!(a.chunks <= a.matched_unigrams);
            prop_assert!(b.matched_unigrams >= a.matched_unigrams);
            if a.matched_unigrams == 0 {
                prop_assert_eq!(a.score, 0.0);
            }
        }
    }

    #[test]
    fn ribes_monotone_in_alpha(h in sentence(5, 12), r in sentence(5, 12), a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let (hs, rs) = (to_seq(&h), to_seq(&r));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for variant in [RibesVariant::Nkt, RibesVariant::Nsr] {
            let x = ribes(&hs, &rs, lo, variant).unwrap();
            let y = ribes(&hs, &rs, hi, variant).unwrap();
            prop_assert!((0.0..=1.0).contains(&x.score));
            prop_assert!(y.score <= x.score + 1e-15);
            if x.precision == 1.0 {
                prop_assert_eq!(x.score, y.score);
            }
        }
    }

    #[test]
    fn ner_monotone(n in 50u64..500, minor in 0u32..10, standard in 0u32..10, serious in 0u32..10, r in 0u32..10) {
        let acc = |m, s, x, r: u32| {
            let rec = NerRecord::new(n, EditionErrors { minor: m, standard: s, serious: x }, f64::from(r)).unwrap();
            ner_accuracy(&rec).unwrap()
        };
        let base = acc(minor, standard, serious, r);
        prop_assert!((0.0..=100.0).contains(&base));
        prop_assert!(acc(minor + 1, standard, serious, r) < base);
        prop_assert!(acc(minor, standard + 1, serious, r) < base);
        prop_assert!(acc(minor, standard, serious + 1, r) < base);
        prop_assert!(acc(minor, standard, serious, r + 1) < base);
        let drop = base - acc(minor + 1, standard, serious, r);
        prop_assert!((drop - 25.0 / n as f64).abs() <= 1e-12);
    }
}

#[test]
fn rank_statistics_bounded_exhaustively() {
    for n in 2..=8 {
        let identity: Vec<usize> = (0..n).collect();
        let reversed: Vec<usize> = (0..n).rev().collect();
        assert_eq!(kendall_nkt(&identity).unwrap(), 1.0);
        assert_eq!(spearman_nsr(&identity).unwrap(), 1.0);
        assert_eq!(kendall_nkt(&reversed).unwrap(), 0.0);
        assert_eq!(spearman_nsr(&reversed).unwrap(), 0.0);
        for p in permutations(n) {
            assert!((0.0..=1.0).contains(&kendall_nkt(&p).unwrap()));
            assert!((0.0..=1.0).contains(&spearman_nsr(&p).unwrap()));
        }
    }
}
