//! NER subtitle accuracy from human error annotations, and reduction rate.
//!
//! Accuracy is `(N − E − R) / N × 100`, where `N` counts tokens (punctuation
//! included), `E` is the severity-weighted count of edition errors made by
//! the re-speaker and `R` the (already weighted) recognition errors.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ErrorSeverity {
    Minor,
    Standard,
    Serious,
}

impl ErrorSeverity {
    pub fn weight(self) -> f64 {
        match self {
            ErrorSeverity::Minor => 0.25,
            ErrorSeverity::Standard => 0.5,
            ErrorSeverity::Serious => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EditionErrors {
    pub minor: u32,
    pub standard: u32,
    pub serious: u32,
}

impl EditionErrors {
    pub fn count(&self, severity: ErrorSeverity) -> u32 {
        match severity {
            ErrorSeverity::Minor => self.minor,
            ErrorSeverity::Standard => self.standard,
            ErrorSeverity::Serious => self.serious,
        }
    }

    /// The weighted E term.
    pub fn weighted(&self) -> f64 {
        [
            ErrorSeverity::Minor,
            ErrorSeverity::Standard,
            ErrorSeverity::Serious,
        ]
        .into_iter()
        .map(|s| f64::from(self.count(s)) * s.weight())
        .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NerRecord {
    /// N: analyzed tokens, punctuation included.
    pub tokens: u64,
    pub edition_errors: EditionErrors,
    /// R: recognition errors, pre-weighted.
    pub recognition_errors: f64,
    /// Source and subtitle token counts, when the annotation carries them.
    pub lengths: Option<(u64, u64)>,
}

impl NerRecord {
    pub fn new(tokens: u64, edition_errors: EditionErrors, recognition_errors: f64) -> Result<Self> {
        let record = NerRecord {
            tokens,
            edition_errors,
            recognition_errors,
            lengths: None,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |message: String| Err(Error::InvalidRecord { line: None, message });
        if self.tokens == 0 {
            return invalid("N must be positive".into());
        }
        if !(self.recognition_errors.is_finite() && self.recognition_errors >= 0.0) {
            return invalid(format!(
                "R must be a non-negative number, got {}",
                self.recognition_errors
            ));
        }
        let e = self.edition_errors.weighted();
        if e + self.recognition_errors > self.tokens as f64 {
            return invalid(format!(
                "E + R = {} exceeds N = {}",
                e + self.recognition_errors,
                self.tokens
            ));
        }
        Ok(())
    }
}

/// NER accuracy in percent.
pub fn ner_accuracy(record: &NerRecord) -> Result<f64> {
    record.validate()?;
    let n = record.tokens as f64;
    Ok((n - record.edition_errors.weighted() - record.recognition_errors) / n * 100.0)
}

/// Relative shortening of the subtitle against the original, in percent.
/// Negative when the subtitle is longer.
pub fn reduction_rate(original: u64, subtitle: u64) -> Result<f64> {
    if original == 0 {
        return Err(Error::InvalidInput("original length must be positive".into()));
    }
    Ok((original as f64 - subtitle as f64) / original as f64 * 100.0)
}

pub const ANNOTATION_COLUMNS: [&str; 5] = ["N", "minor", "standard", "serious", "R"];

/// Reads the annotation CSV: a header row, then one row per transcript with
/// `N,minor,standard,serious,R` and optionally `original,subtitle` token
/// counts for the reduction rate.
pub fn parse_ner_annotations<R: Read>(input: R) -> Result<Vec<NerRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header_width = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .len();
    if header_width != 5 && header_width != 7 {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected 5 or 7 header columns, found {header_width}"),
        });
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != header_width {
            return Err(Error::Parse {
                line,
                message: format!("expected {header_width} fields, found {}", row.len()),
            });
        }
        let int = |i: usize| -> Result<u64> {
            row[i].parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("field {} (`{}`) is not a non-negative integer", i + 1, &row[i]),
            })
        };
        let count = |i: usize| -> Result<u32> {
            u32::try_from(int(i)?).map_err(|_| Error::Parse {
                line,
                message: format!("field {} is too large", i + 1),
            })
        };
        let recognition: f64 = row[4].parse().map_err(|_| Error::Parse {
            line,
            message: format!("field 5 (`{}`) is not a number", &row[4]),
        })?;
        let record = NerRecord {
            tokens: int(0)?,
            edition_errors: EditionErrors {
                minor: count(1)?,
                standard: count(2)?,
                serious: count(3)?,
            },
            recognition_errors: recognition,
            lengths: if header_width == 7 {
                Some((int(5)?, int(6)?))
            } else {
                None
            },
        };
        record.validate().map_err(|e| match e {
            Error::InvalidRecord { message, .. } => Error::InvalidRecord {
                line: Some(line),
                message,
            },
            other => other,
        })?;
        records.push(record);
    }
    Ok(records)
}
