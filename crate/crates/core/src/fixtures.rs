//! Published per-speaker evaluation tables, embedded as CSV.
//!
//! Both tables share the header
//! `SPKR,BLEU,NIST,TER,METEOR,METEOR-PL,EBLEU,RIBES,NER,RED.`; values are
//! kept digit-for-digit as published (NIST raw, everything else ×100).
//! `TABLE1` scores human transcriptions of re-speech against the original
//! (57 speakers); `TABLE2` scores ASR output against the original (20).

use crate::error::{Error, Result};
use crate::stats::DataTable;

pub const TABLE1: &str = include_str!("../data/table1.csv");
pub const TABLE2: &str = include_str!("../data/table2.csv");

/// The seven automatic metric columns, in table order.
pub const METRIC_COLUMNS: [&str; 7] = ["BLEU", "NIST", "TER", "METEOR", "METEOR-PL", "EBLEU", "RIBES"];

pub fn csv(name: &str) -> Result<&'static str> {
    match name {
        "table1" => Ok(TABLE1),
        "table2" => Ok(TABLE2),
        other => Err(Error::InvalidInput(format!(
            "unknown fixture `{other}` (expected table1 or table2)"
        ))),
    }
}

pub fn table(name: &str) -> Result<DataTable> {
    DataTable::from_csv(csv(name)?.as_bytes())
}
