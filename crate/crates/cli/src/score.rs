use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use respeak_core::align_metrics::{meteor_multi, ribes_multi, ter_multi};
use respeak_core::ner::reduction_rate;
use respeak_core::ngram_metrics::{
    bleu, BleuConfig, EbleuConfig, EbleuScorer, NistConfig, NistScorer, Smoothing,
};
use respeak_core::textcore::tokenize;
use respeak_core::{Error, LanguageResources, RibesVariant, TokenSequence, TokenizerConfig};

use crate::args::{Format, ScoreArgs};
use crate::error::{CliError, CliResult};
use crate::output::{cell, Sink};

const NIST_SCHEME: &str = "info-weighted n-gram matches, info = log2(count(prefix)/count(ngram)) over the reference corpus, exp(beta*log^2(min(c/r,1))) length factor";

struct Transcript {
    path: PathBuf,
    lines: Vec<String>,
}

fn read_transcript(path: &Path) -> CliResult<Transcript> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let lines = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().to_owned())
        .collect();
    Ok(Transcript {
        path: path.to_owned(),
        lines,
    })
}

#[derive(Serialize)]
struct ResourceEcho {
    path: String,
    sha256: String,
}

fn digest(path: &Path) -> CliResult<ResourceEcho> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let sha256 = Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(ResourceEcho {
        path: path.display().to_string(),
        sha256,
    })
}

#[derive(Serialize)]
struct Resources {
    synonyms: Option<ResourceEcho>,
    stems: Option<ResourceEcho>,
    function_words: Option<ResourceEcho>,
    function_word_weight: f64,
}

#[derive(Serialize)]
struct NistEcho<'a> {
    max_n: usize,
    brevity_beta: f64,
    scheme: &'a str,
}

#[derive(Serialize)]
struct MeteorEcho {
    penalty_exponent: f64,
}

#[derive(Serialize)]
struct RibesEcho {
    alpha: f64,
    variant: RibesVariant,
}

#[derive(Serialize)]
struct ConfigRecord<'a> {
    record: &'static str,
    hypothesis: String,
    references: Vec<String>,
    segments: usize,
    seed: u64,
    scale: &'static str,
    tokenizer: TokenizerConfig,
    bleu: &'a BleuConfig,
    nist: NistEcho<'a>,
    ebleu: &'a EbleuConfig,
    meteor: MeteorEcho,
    ribes: RibesEcho,
    reduction_unit: &'static str,
    resources: Resources,
}

#[derive(Serialize, Debug)]
struct SegmentRecord {
    record: &'static str,
    segment: usize,
    bleu: f64,
    nist: f64,
    ter: f64,
    meteor: f64,
    meteor_pl: Option<f64>,
    ebleu: f64,
    ribes: f64,
    red: Option<f64>,
}

#[derive(Serialize)]
struct CorpusRecord {
    record: &'static str,
    segments: usize,
    bleu: f64,
    bleu_precisions: Vec<Option<f64>>,
    brevity_penalty: f64,
    nist: f64,
    ter: f64,
    meteor: f64,
    meteor_pl: Option<f64>,
    ebleu: f64,
    ebleu_precisions: Vec<Option<f64>>,
    ribes: f64,
    red: Option<f64>,
}

fn pct(x: f64) -> f64 {
    x * 100.0
}

/// An empty hypothesis scores zero rather than aborting the report.
fn or_zero(r: Result<f64, Error>) -> Result<f64, Error> {
    match r {
        Err(Error::EmptyHypothesis) => Ok(0.0),
        other => other,
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

struct Scorers<'a> {
    bleu: &'a BleuConfig,
    nist: NistScorer<'a>,
    ebleu: EbleuScorer<'a>,
    empty: LanguageResources,
    resources: &'a LanguageResources,
    penalty_exponent: f64,
    ribes_alpha: f64,
    ribes_variant: RibesVariant,
    chars: bool,
}

impl Scorers<'_> {
    fn segment(
        &self,
        index: usize,
        hyp: &TokenSequence,
        rs: &[Vec<TokenSequence>],
        raw_hyp: &str,
        raw_ref: &str,
    ) -> Result<SegmentRecord, Error> {
        let hs = std::slice::from_ref(hyp);
        let refs = &rs[0];
        let meteor_pl = if self.resources.is_empty() {
            None
        } else {
            Some(pct(meteor_multi(
                hyp,
                refs,
                self.resources,
                self.penalty_exponent,
            )?
            .score))
        };
        let red = if self.chars {
            reduction_rate(raw_ref.chars().count() as u64, raw_hyp.chars().count() as u64).ok()
        } else {
            reduction_rate(refs[0].len() as u64, hyp.len() as u64).ok()
        };
        Ok(SegmentRecord {
            record: "segment",
            segment: index + 1,
            bleu: pct(or_zero(bleu(hs, rs, self.bleu).map(|s| s.score))?),
            nist: or_zero(self.nist.score(hs, rs).map(|s| s.score))?,
            ter: pct(ter_multi(hyp, refs)?.ter),
            meteor: pct(meteor_multi(hyp, refs, &self.empty, self.penalty_exponent)?.score),
            meteor_pl,
            ebleu: pct(or_zero(self.ebleu.score(hs, rs).map(|s| s.score))?),
            ribes: pct(ribes_multi(hyp, refs, self.ribes_alpha, self.ribes_variant)?.score),
            red,
        })
    }
}

pub fn run(args: &ScoreArgs, seed: u64, format: Format, sink: &mut Sink) -> CliResult<()> {
    let tokenizer = TokenizerConfig::new(
        !args.tokenizer.case_sensitive,
        !(args.tokenizer.no_split_punct || args.tokenizer.strip_punct),
        args.tokenizer.strip_punct,
    )?;
    let mut bleu_config = BleuConfig::new(args.max_n)?;
    bleu_config.sentence_level = args.sentence_level;
    if args.smooth {
        bleu_config.smoothing = Smoothing::AddOne;
    }
    let nist_config = NistConfig {
        max_n: args.nist_max_n,
        ..NistConfig::default()
    };
    let ebleu_config = EbleuConfig {
        synonym_score: args.synonym_score,
        rare_words_percent: args.rare_words_percent,
        rare_words_score: args.rare_words_score,
        max_n: args.max_n,
    };
    ebleu_config.validate()?;
    let resources = LanguageResources::from_files(
        args.synonyms.as_deref(),
        args.stems.as_deref(),
        args.function_words.as_deref(),
    )?
    .with_function_word_weight(args.function_word_weight)?;
    let echo = Resources {
        synonyms: args.synonyms.as_deref().map(digest).transpose()?,
        stems: args.stems.as_deref().map(digest).transpose()?,
        function_words: args.function_words.as_deref().map(digest).transpose()?,
        function_word_weight: args.function_word_weight,
    };

    let hyp_file = read_transcript(&args.hyp)?;
    let ref_files = args
        .refs
        .iter()
        .map(|p| read_transcript(p))
        .collect::<CliResult<Vec<_>>>()?;
    for r in &ref_files {
        if r.lines.len() != hyp_file.lines.len() {
            return Err(CliError::Input(format!(
                "segment count mismatch: {} has {} segments, {} has {}",
                hyp_file.path.display(),
                hyp_file.lines.len(),
                r.path.display(),
                r.lines.len()
            )));
        }
    }
    if hyp_file.lines.is_empty() {
        return Err(Error::EmptyCorpus.into());
    }

    let hyps: Vec<TokenSequence> = hyp_file.lines.iter().map(|l| tokenize(l, &tokenizer)).collect();
    let refs: Vec<Vec<TokenSequence>> = (0..hyps.len())
        .map(|i| {
            ref_files
                .iter()
                .map(|f| tokenize(&f.lines[i], &tokenizer))
                .collect()
        })
        .collect();
    if let Some(i) = refs.iter().position(|rs| rs.iter().any(|r| r.is_empty())) {
        return Err(CliError::Input(format!(
            "segment {}: reference has no tokens",
            i + 1
        )));
    }

    let scorers = Scorers {
        bleu: &bleu_config,
        nist: NistScorer::new(&refs, nist_config.clone())?,
        ebleu: EbleuScorer::new(&refs, ebleu_config.clone(), &resources)?,
        empty: LanguageResources::default(),
        resources: &resources,
        penalty_exponent: args.meteor_penalty_exp,
        ribes_alpha: args.ribes_alpha,
        ribes_variant: args.ribes_variant.into(),
        chars: args.chars,
    };
    let segments = (0..hyps.len())
        .into_par_iter()
        .map(|i| {
            scorers
                .segment(
                    i,
                    &hyps[i],
                    std::slice::from_ref(&refs[i]),
                    &hyp_file.lines[i],
                    &ref_files[0].lines[i],
                )
                .map_err(|e| match e {
                    Error::InvalidConfig(_) => CliError::Core(e),
                    other => CliError::Input(format!("segment {}: {other}", i + 1)),
                })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let corpus_bleu = match bleu(&hyps, &refs, &bleu_config) {
        Err(Error::EmptyHypothesis) => None,
        other => Some(other?),
    };
    let corpus_ebleu = match scorers.ebleu.score(&hyps, &refs) {
        Err(Error::EmptyHypothesis) => None,
        other => Some(other?),
    };
    let corpus_nist = or_zero(scorers.nist.score(&hyps, &refs).map(|s| s.score))?;
    let (edits, ref_words) = hyps
        .iter()
        .zip(&refs)
        .try_fold((0.0, 0usize), |(e, n), (h, rs)| {
            ter_multi(h, rs).map(|t| (e + t.edits, n + t.ref_length))
        })?;
    let red = if args.chars {
        let count = |lines: &[String]| lines.iter().map(|l| l.chars().count() as u64).sum::<u64>();
        reduction_rate(count(&ref_files[0].lines), count(&hyp_file.lines)).ok()
    } else {
        let total =
            |seqs: &mut dyn Iterator<Item = &TokenSequence>| seqs.map(|s| s.len() as u64).sum::<u64>();
        reduction_rate(total(&mut refs.iter().map(|r| &r[0])), total(&mut hyps.iter())).ok()
    };
    let per_order = |v: &[Option<f64>]| v.iter().map(|p| p.map(pct)).collect::<Vec<_>>();
    let corpus = CorpusRecord {
        record: "corpus",
        segments: segments.len(),
        bleu: corpus_bleu.as_ref().map_or(0.0, |b| pct(b.score)),
        bleu_precisions: corpus_bleu
            .as_ref()
            .map_or_else(Vec::new, |b| per_order(&b.precisions)),
        brevity_penalty: corpus_bleu.as_ref().map_or(0.0, |b| b.brevity_penalty),
        nist: corpus_nist,
        ter: pct(edits / ref_words as f64),
        meteor: mean(segments.iter().map(|s| s.meteor)),
        meteor_pl: (!resources.is_empty()).then(|| mean(segments.iter().filter_map(|s| s.meteor_pl))),
        ebleu: corpus_ebleu.as_ref().map_or(0.0, |e| pct(e.score)),
        ebleu_precisions: corpus_ebleu
            .as_ref()
            .map_or_else(Vec::new, |e| per_order(&e.per_order_base)),
        ribes: mean(segments.iter().map(|s| s.ribes)),
        red,
    };

    let config = ConfigRecord {
        record: "config",
        hypothesis: hyp_file.path.display().to_string(),
        references: ref_files.iter().map(|f| f.path.display().to_string()).collect(),
        segments: segments.len(),
        seed,
        scale: "percent except nist",
        tokenizer,
        bleu: &bleu_config,
        nist: NistEcho {
            max_n: nist_config.max_n,
            brevity_beta: nist_config.brevity_beta,
            scheme: NIST_SCHEME,
        },
        ebleu: &ebleu_config,
        meteor: MeteorEcho {
            penalty_exponent: args.meteor_penalty_exp,
        },
        ribes: RibesEcho {
            alpha: args.ribes_alpha,
            variant: args.ribes_variant.into(),
        },
        reduction_unit: if args.chars { "chars" } else { "tokens" },
        resources: echo,
    };

    match format {
        Format::Jsonl => {
            sink.record(&config)?;
            for s in &segments {
                sink.record(s)?;
            }
            sink.record(&corpus)?;
        }
        Format::Text => write_text(sink, &config, &segments, &corpus)?,
    }
    Ok(())
}

fn write_text(
    sink: &mut Sink,
    config: &ConfigRecord,
    segments: &[SegmentRecord],
    corpus: &CorpusRecord,
) -> CliResult<()> {
    let tok = &config.tokenizer;
    sink.line(format!(
        "# {} vs {} ({} segments, seed {})",
        config.hypothesis,
        config.references.join(", "),
        config.segments,
        config.seed
    ))?;
    sink.line(format!(
        "# tokenizer: lowercase={} split_punctuation={} strip_punctuation={}; BLEU/EBLEU n<={}{}{}; NIST n<={}; RED in {}",
        tok.lowercase,
        tok.split_punctuation,
        tok.strip_punctuation,
        config.bleu.max_n,
        if config.bleu.sentence_level { ", sentence-level" } else { "" },
        if config.bleu.smoothing == Smoothing::AddOne { ", add-one" } else { "" },
        config.nist.max_n,
        config.reduction_unit
    ))?;
    for (name, r) in [
        ("synonyms", &config.resources.synonyms),
        ("stems", &config.resources.stems),
        ("function words", &config.resources.function_words),
    ] {
        if let Some(r) = r {
            sink.line(format!("# {name}: {} sha256 {}", r.path, r.sha256))?;
        }
    }
    sink.line(format!(
        "{:<8}{:>8}{:>8}{:>8}{:>8}{:>11}{:>8}{:>8}{:>8}",
        "SEG", "BLEU", "NIST", "TER", "METEOR", "METEOR-PL", "EBLEU", "RIBES", "RED."
    ))?;
    let row = |label: String, b, n, t, m, mpl, e, r, red| {
        format!(
            "{label:<8}{}{}{}{}{}{}{}{}",
            cell(Some(b), 8, 2),
            cell(Some(n), 8, 2),
            cell(Some(t), 8, 2),
            cell(Some(m), 8, 2),
            cell(mpl, 11, 2),
            cell(Some(e), 8, 2),
            cell(Some(r), 8, 2),
            cell(red, 8, 2)
        )
    };
    for s in segments {
        sink.line(row(
            s.segment.to_string(),
            s.bleu,
            s.nist,
            s.ter,
            s.meteor,
            s.meteor_pl,
            s.ebleu,
            s.ribes,
            s.red,
        ))?;
    }
    let c = corpus;
    sink.line(row(
        "CORPUS".into(),
        c.bleu,
        c.nist,
        c.ter,
        c.meteor,
        c.meteor_pl,
        c.ebleu,
        c.ribes,
        c.red,
    ))?;
    let orders = |v: &[Option<f64>]| {
        v.iter()
            .map(|p| p.map_or("-".to_owned(), |p| format!("{p:.2}")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    sink.line(format!(
        "# BLEU precisions: {} (BP {:.4}); EBLEU per-order: {}",
        orders(&c.bleu_precisions),
        c.brevity_penalty,
        orders(&c.ebleu_precisions)
    ))?;
    Ok(())
}
