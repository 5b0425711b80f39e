use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use respeak_core::RibesVariant;

#[derive(Parser, Debug)]
#[command(
    name = "respeak",
    version,
    about = "Score re-spoken transcripts and fit NER regression models"
)]
pub struct Cli {
    /// Seed for randomized steps; echoed in reports.
    #[arg(long, global = true, default_value_t = 0x5eed_2015)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Score a hypothesis transcript against one or more references.
    Score(ScoreArgs),
    /// NER accuracy and reduction rate from an annotation CSV.
    Ner(NerArgs),
    /// Backward-eliminated OLS of a response on metric columns.
    Regress(RegressArgs),
    /// Apply a fitted model to metric scores.
    Predict(PredictArgs),
    /// Print a built-in metric table as CSV.
    Fixture(FixtureArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    Table1,
    Table2,
}

impl FixtureName {
    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::Table1 => "table1",
            FixtureName::Table2 => "table2",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Nkt,
    Nsr,
}

impl From<VariantArg> for RibesVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Nkt => RibesVariant::Nkt,
            VariantArg::Nsr => RibesVariant::Nsr,
        }
    }
}

#[derive(Args, Debug)]
pub struct TokenizerArgs {
    /// Keep letter case.
    #[arg(long)]
    pub case_sensitive: bool,
    /// Leave punctuation attached to words.
    #[arg(long)]
    pub no_split_punct: bool,
    /// Drop punctuation entirely.
    #[arg(long)]
    pub strip_punct: bool,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    /// Hypothesis transcript, one segment per line.
    pub hyp: PathBuf,
    /// Reference transcripts aligned line by line with the hypothesis.
    #[arg(required = true)]
    pub refs: Vec<PathBuf>,

    #[command(flatten)]
    pub tokenizer: TokenizerArgs,

    /// Highest n-gram order for BLEU and EBLEU.
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,
    #[arg(long, default_value_t = 5)]
    pub nist_max_n: usize,
    /// Average segment BLEU scores instead of pooling counts.
    #[arg(long)]
    pub sentence_level: bool,
    /// Add-one smoothing for BLEU orders above 1.
    #[arg(long)]
    pub smooth: bool,

    #[arg(long, value_name = "FILE")]
    pub synonyms: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub stems: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub function_words: Option<PathBuf>,
    #[arg(long, default_value_t = respeak_core::align_metrics::DEFAULT_FUNCTION_WORD_WEIGHT)]
    pub function_word_weight: f64,

    #[arg(long, default_value_t = 0.9)]
    pub synonym_score: f64,
    #[arg(long, default_value_t = 0.05)]
    pub rare_words_percent: f64,
    #[arg(long, default_value_t = 1.1)]
    pub rare_words_score: f64,

    #[arg(long, default_value_t = respeak_core::align_metrics::DEFAULT_PENALTY_EXPONENT)]
    pub meteor_penalty_exp: f64,
    #[arg(long, default_value_t = respeak_core::align_metrics::DEFAULT_ALPHA)]
    pub ribes_alpha: f64,
    #[arg(long, value_enum, default_value_t = VariantArg::Nkt)]
    pub ribes_variant: VariantArg,

    /// Measure the reduction rate in characters rather than tokens.
    #[arg(long)]
    pub chars: bool,
}

#[derive(Args, Debug)]
pub struct NerArgs {
    /// Annotation CSV: N,minor,standard,serious,R[,original,subtitle].
    pub annotations: PathBuf,
}

#[derive(Args, Debug)]
pub struct RegressArgs {
    /// Metric table CSV; omit when using --fixture.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub fixture: Option<FixtureName>,
    #[arg(long, default_value = "NER")]
    pub response: String,
    /// Comma-separated candidate predictors, in elimination tie order.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Vec<String>,
    #[arg(long, default_value_t = respeak_core::stats::DEFAULT_ALPHA)]
    pub alpha: f64,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// JSONL output of `regress`; its last stage is used.
    #[arg(long, value_name = "FILE", required_unless_present = "builtin_ner_model")]
    pub model: Option<PathBuf>,
    /// The published NER equation over BLEU, NIST and EBLEU.
    #[arg(long, conflicts_with = "model")]
    pub builtin_ner_model: bool,
    /// Predictor value, e.g. --score BLEU=88.82.
    #[arg(long = "score", value_name = "NAME=VALUE", value_parser = parse_score)]
    pub scores: Vec<(String, f64)>,
}

fn parse_score(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    if !value.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok((name.trim().to_owned(), value))
}

#[derive(Args, Debug)]
pub struct FixtureArgs {
    #[arg(long, value_enum)]
    pub fixture: FixtureName,
}
